"""
Steiner ocycles - command line entry point.

Equivalent to the installed ``steiner-ocycles`` script:

    python main.py generate 37 --route af --out bundles/37
"""

from steiner_ocycles.cli import main

if __name__ == "__main__":
    raise SystemExit(main())
