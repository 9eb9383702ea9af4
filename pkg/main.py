#!/usr/bin/env python3
"""Entry point script for the distcomp command line."""

from distcomp.app import main

if __name__ == "__main__":
    main()
