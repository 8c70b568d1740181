import sys

from cubature5.cli import main

sys.exit(main())
