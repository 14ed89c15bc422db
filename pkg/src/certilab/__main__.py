import sys

from certilab.cli import main

sys.exit(main())
