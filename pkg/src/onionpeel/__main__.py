import sys

from onionpeel.cli import main

sys.exit(main())
