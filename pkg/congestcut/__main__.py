"""Entry point of `python -m congestcut`."""

import sys

from congestcut.cli import main

sys.exit(main())
