import sys

from fymlab.cli import main

sys.exit(main())
