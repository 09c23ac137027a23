import sys

from lampsep.cli import main

sys.exit(main())
