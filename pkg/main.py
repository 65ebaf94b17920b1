"""Entry point for the nonstat CLI."""
from nonstat.cli import main


if __name__ == "__main__":
    main()
