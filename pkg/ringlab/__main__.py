"""Entry point for running ringlab as a module."""

from ringlab.cli.app import app

if __name__ == "__main__":
    app()
