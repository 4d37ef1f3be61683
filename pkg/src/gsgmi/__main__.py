import sys

from gsgmi.cli import main

sys.exit(main())
