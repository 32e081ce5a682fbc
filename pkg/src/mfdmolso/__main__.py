import sys

from mfdmolso.cli import main

sys.exit(main())
