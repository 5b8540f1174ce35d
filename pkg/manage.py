#!/usr/bin/env python
"""
Entry point of the psplines project.

Besides the Django commands this runs the spline tools:
knots, penalty, fit, simulate and verify.
"""
import os
import sys


def main():
    os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'config.settings')
    try:
        from django.core.management import execute_from_command_line
    except ImportError as exc:
        raise ImportError(
            "Couldn't import Django. Install the requirements (pip install -r requirements.txt) "
            "inside the active virtual environment."
        ) from exc
    execute_from_command_line(sys.argv)


if __name__ == '__main__':
    main()
