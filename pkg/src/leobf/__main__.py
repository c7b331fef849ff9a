import sys

from leobf.cli import main

sys.exit(main())
