import sys

from twoparam.cli import main

sys.exit(main())
