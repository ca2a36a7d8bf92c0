"""Allow `python -m lamekit`."""

from lamekit.cli import main

if __name__ == "__main__":
    main()
