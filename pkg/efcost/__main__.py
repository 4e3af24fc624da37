import sys

from efcost.cli import main

if __name__ == "__main__":
    sys.exit(main())
