#!/usr/bin/env python3
"""
Govctl launcher script
"""

if __name__ == "__main__":
    import sys
    from src.main import main
    sys.exit(main())
