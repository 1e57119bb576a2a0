import sys

import seizure.cli


__author__ = "Jérémie Lumbroso <lumbroso@cs.princeton.edu>"


if __name__ == "__main__":
    sys.exit(seizure.cli.main())
