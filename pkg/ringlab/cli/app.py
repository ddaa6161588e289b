"""Main CLI application for RingLab."""

import typer
from rich.console import Console

from ringlab import __version__
from ringlab.cli.commands import chain, classify, describe, selftest, split, sr1, verify
from ringlab.utils.log import set_verbosity

# Create main app
app = typer.Typer(
    name="ringlab",
    help="RingLab - decomposition chains and unit-regularity in finite rings",
    no_args_is_help=True,
)

console = Console()


@app.callback()
def main(
    verbose: int = typer.Option(
        0, "--verbose", "-v", count=True, help="Log progress to stderr (-vv for debug)"
    ),
) -> None:
    """Exact, brute-force checked computations over finite rings."""
    set_verbosity(verbose)


# Commands
app.command("describe")(describe.describe)
app.command("classify")(classify.classify)
app.command("split")(split.split)
app.command("chain")(chain.chain)
app.command("sr1")(sr1.sr1)
app.command("selftest")(selftest.selftest)
app.command("verify")(verify.verify)


@app.command("version")
def show_version() -> None:
    """Show version information."""
    console.print(f"RingLab v{__version__}")


if __name__ == "__main__":
    app()
