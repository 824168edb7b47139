import sys

from orientdiam.cli import main

sys.exit(main())
