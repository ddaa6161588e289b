"""Rich display components for the CLI (``--format table``)."""

from rich import box
from rich.console import Console
from rich.panel import Panel
from rich.table import Table

from ringlab.data.reports import Report
from ringlab.utils.helpers import pluralize

console = Console()

VERDICT_COLORS = {
    "true": "green",
    "false": "red",
    "unknown": "yellow",
}


def _mark(flag: bool | None) -> str:
    if flag is None:
        return "[dim]-[/dim]"
    return "[green]yes[/green]" if flag else "[dim]no[/dim]"


def _verdict(value: str) -> str:
    color = VERDICT_COLORS.get(value, "white")
    return f"[{color}]{value}[/{color}]"


def display_ring(report: Report) -> None:
    """Header panel naming the ring a report is about."""
    if report.ring is None:
        return
    ring = report.ring
    console.print(
        Panel(
            f"[bold]{ring.name}[/bold]  p={ring.p}  dim={ring.dim}  [dim]{ring.hash}[/dim]",
            title=f"ringlab {report.command}",
            box=box.ROUNDED,
        )
    )


def display_checks(report: Report) -> None:
    if report.error is not None:
        console.print(f"[red]{report.error.code}[/red]: {report.error.message}")
    if not report.verification:
        return
    table = Table(title="Verification", box=box.ROUNDED)
    table.add_column("Check", min_width=30)
    table.add_column("Result", width=8)
    table.add_column("Detail", style="dim")
    for check in report.verification:
        result = "[green]pass[/green]" if check.passed else "[red]FAIL[/red]"
        table.add_row(check.name, result, check.detail)
    console.print(table)
    passed = sum(check.passed for check in report.verification)
    console.print(f"[dim]{passed}/{pluralize(len(report.verification), 'check')} passed[/dim]")


def display_describe(report: Report) -> None:
    display_ring(report)
    info = report.result
    table = Table(box=box.SIMPLE, show_header=False)
    table.add_column("Field", style="bold")
    table.add_column("Value")
    for key in ("order", "labels", "one", "units", "gl_order", "nilpotent_count"):
        if key in info and info[key] is not None:
            value = info[key]
            table.add_row(key, ", ".join(value) if isinstance(value, list) else str(value))
    console.print(table)
    element = info.get("element")
    if element:
        _display_profile_row([element], title=f"Element {element['element']}")
        chain = info.get("pi_chain_dims", [])
        if chain:
            dims = "  ".join(f"({left},{right})" for left, right in chain)
            console.print(f"[dim]dim a^nR, dim Ra^n for n = 0, 1, ...:[/dim] {dims}")
        peirce = info.get("peirce_dimensions")
        if peirce:
            corners = "eRe, eR(1-e), (1-e)Re, (1-e)R(1-e)"
            console.print(f"[dim]Peirce dimensions ({corners}):[/dim] {peirce}")
    display_checks(report)


def _display_profile_row(profiles: list[dict], title: str) -> None:
    table = Table(title=title, box=box.ROUNDED)
    table.add_column("#", style="dim", justify="right")
    table.add_column("Element", min_width=12)
    table.add_column("Unit", width=5)
    table.add_column("Idem", width=5)
    table.add_column("Nil", width=4, justify="right")
    table.add_column("Regular", width=8)
    table.add_column("Unit-regular", width=12)
    table.add_column("SPR", width=4, justify="right")
    table.add_column("dim aR", width=7, justify="right")
    for profile in profiles:
        nil = profile.get("nilpotency_index")
        table.add_row(
            str(profile["index"]),
            profile["element"],
            _mark(profile["is_unit"]),
            _mark(profile["is_idempotent"]),
            str(nil) if nil is not None else "[dim]-[/dim]",
            _mark(profile["is_regular"]),
            _verdict(profile["unit_regular"]),
            str(profile["spr_index"]),
            str(profile["dim_aR"]),
        )
    console.print(table)


def display_classification(report: Report, limit: int = 64) -> None:
    display_ring(report)
    summary = report.result.get("summary", {})
    table = Table(title="Summary", box=box.ROUNDED)
    for key in summary:
        table.add_column(key.replace("_", " "), justify="right")
    table.add_row(*(str(value) for value in summary.values()))
    console.print(table)
    profiles = report.result.get("profiles", [])
    if profiles:
        _display_profile_row(profiles[:limit], title="Elements")
        if len(profiles) > limit:
            rest = pluralize(len(profiles) - limit, "more element")
            console.print(f"[dim]... {rest} in --format json[/dim]")
    display_checks(report)


def display_split(report: Report) -> None:
    display_ring(report)
    split = report.result.get("split")
    if split:
        table = Table(box=box.SIMPLE, show_header=False)
        table.add_column("Field", style="bold")
        table.add_column("Value")
        for key, value in split.items():
            if not key.endswith("_coords"):
                table.add_row(key, str(value))
        console.print(table)
    display_checks(report)


def display_chain(report: Report) -> None:
    display_ring(report)
    chain = report.result.get("chain")
    if chain:
        console.print(
            f"[bold]{chain['variant']}[/bold] chain for a = {chain['element']}: "
            f"dim K = {len(chain['K'])}, dim R/aR = {chain['quotient_dim']}"
        )
        table = Table(title="Levels", box=box.ROUNDED)
        for column in ("j", "dim A_j", "dim A_j'", "dim Y_j", "dim Y_j'", "dim E_j"):
            table.add_column(column, justify="right")
        for level in chain["levels"]:
            y_prime = level.get("Y_prime")
            table.add_row(
                str(level["j"]),
                str(len(level["A"])),
                str(len(level["A_prime"])),
                str(len(level["Y"])),
                str(len(y_prime)) if y_prime is not None else "-",
                str(len(level["E"])),
            )
        console.print(table)
        witness = chain.get("witness")
        if witness:
            console.print(f"[green]Unit witness[/green] u = {witness['u']} (aua = a)")
        else:
            console.print("[dim]a^n != 0 at this level count; no unit witness[/dim]")
    display_checks(report)


def display_sr1(report: Report) -> None:
    display_ring(report)
    result = report.result
    if "holds" in result:
        verdict = "[green]holds[/green]" if result["holds"] else "[red]fails[/red]"
        console.print(
            f"Stable range one {verdict}: {result['pairs_checked']} pairs checked, "
            f"{result['witnessed_pairs']} with a unit a + by"
        )
        if result.get("counterexample"):
            a, b = result["counterexample"]
            console.print(f"[yellow]Counterexample[/yellow] a = {a}, b = {b}")
    display_checks(report)


def display_selftest(report: Report) -> None:
    table = Table(title="Self-test", box=box.ROUNDED)
    table.add_column("#", justify="right", style="dim")
    table.add_column("Check", min_width=30)
    table.add_column("Result", width=8)
    table.add_column("Seconds", justify="right")
    table.add_column("Detail", style="dim")
    for check in report.result.get("checks", []):
        result = "[green]pass[/green]" if check["passed"] else "[red]FAIL[/red]"
        table.add_row(
            str(check["number"]), check["name"], result, f"{check['seconds']:.2f}", check["detail"]
        )
    console.print(table)
    for check in report.result.get("checks", []):
        for failure in check["failures"]:
            console.print(f"[red]  {check['number']}: {failure}[/red]")
    display_checks(report)
