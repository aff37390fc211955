import sys

from glaplace.cli import main

sys.exit(main())
