import sys

from mixedvol.cli import main

sys.exit(main())
