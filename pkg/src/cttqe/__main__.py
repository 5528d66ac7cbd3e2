import sys

from cttqe.cli import main

sys.exit(main())
