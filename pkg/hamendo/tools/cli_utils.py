import click
from click import Context, HelpFormatter
from typing import Any, List, Optional, Tuple

from hamendo.error import InvalidParamsError
from hamendo.hamming import GraphParams


class DefaultGroup(click.Group):
    """Invokes the subcommand named by ``default`` when the command line is
    empty. Unknown subcommands stay usage errors.

    :param default_if_no_args: resolves to the default command if no arguments
                               passed.

    """

    def __init__(self, *args: Any, **kwargs: Any) -> None:
        self.default_cmd_name: Optional[str] = kwargs.pop("default", None)
        self.default_if_no_args: bool = kwargs.pop("default_if_no_args", False)
        super().__init__(*args, **kwargs)

    def parse_args(self, ctx: Context, args: List[str]) -> List[str]:
        if self.default_if_no_args and self.default_cmd_name and not _has_command(self, args):
            args = args + [self.default_cmd_name]
        return super().parse_args(ctx, args)

    def format_commands(self, ctx: Context, formatter: HelpFormatter) -> None:
        formatter = DefaultCommandFormatter(self, formatter, mark="*")  # type: ignore[assignment]
        return super().format_commands(ctx, formatter)


def _has_command(group: click.Group, args: List[str]) -> bool:
    """True when a non-option token is present, i.e. a subcommand was named."""
    skip_value = False
    for arg in args:
        if skip_value:
            skip_value = False
            continue
        if arg in ("-h", "--help", "-v", "--version"):
            return True
        if arg.startswith("-"):
            option = next((p for p in group.params if arg.split("=")[0] in getattr(p, "opts", [])), None)
            skip_value = option is not None and not getattr(option, "is_flag", False) and "=" not in arg
            continue
        return True
    return False


class DefaultCommandFormatter(HelpFormatter):
    """Wraps a formatter to mark the default command."""

    def __init__(self, group: DefaultGroup, formatter: HelpFormatter, mark: str = "*"):
        self.group = group
        self.formatter = formatter
        self.mark = mark

    def __getattr__(self, attr):  # type: ignore
        return getattr(self.formatter, attr)

    def write_dl(self, rows, *args, **kwargs):  # type: ignore
        rows_ = []  # type: ignore
        for cmd_name, help in rows:
            if cmd_name == self.group.default_cmd_name:
                rows_.insert(0, (cmd_name + self.mark, help))
            else:
                rows_.append((cmd_name, help))
        return self.formatter.write_dl(rows_, *args, **kwargs)


class GraphParamType(click.ParamType):
    """``3x3x3:S=1,2`` style graph parameters; a bad form is a usage error."""

    name = "graph"

    def convert(self, value: Any, param: Optional[click.Parameter], ctx: Optional[Context]) -> GraphParams:
        if isinstance(value, GraphParams):
            return value
        try:
            return GraphParams.from_text(value)
        except InvalidParamsError as e:
            self.fail(str(e), param, ctx)


class IntListType(click.ParamType):
    """Comma separated positive integers, e.g. ``3,2``."""

    name = "ints"

    def convert(self, value: Any, param: Optional[click.Parameter], ctx: Optional[Context]) -> Tuple[int, ...]:
        if isinstance(value, tuple):
            return value
        try:
            values = tuple(int(part) for part in str(value).replace("x", ",").split(","))
        except ValueError:
            self.fail(f"{value!r} is not a comma separated list of integers", param, ctx)
        if not values or any(v < 1 for v in values):
            self.fail(f"{value!r} must list positive integers", param, ctx)
        return values


GRAPH = GraphParamType()
INT_LIST = IntListType()
