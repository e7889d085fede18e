"""Command-line interface: parse, validate, render, eval, serve, import.

Diagnostics go to stderr, rendered text to stdout; exit code 2 signals
content/input problems with the same error codes the HTTP API uses.
"""

import json
import sys

import click

from .config import load_config
from .engine import Engine
from .errors import AbstextError

from .notation import parse_content, parse_value_text, serialize_content, serialize_value

_EXIT_DIAGNOSTICS = 2


def _engine(data, config_path) -> Engine:
    config = load_config(config_path)
    return Engine(data_dir=data, config=config)


def _fail(exc: AbstextError):
    click.echo(json.dumps(exc.to_dict(), ensure_ascii=False), err=True)
    sys.exit(_EXIT_DIAGNOSTICS)


def _echo_diagnostics(diagnostics):
    for d in diagnostics:
        click.echo(f"{d.where or '<root>'}: {d.code} {d.message}", err=True)


@click.group()
def main():
    """Abstract content tooling: validate, render and evaluate."""


_data_option = click.option("--data", type=click.Path(exists=True, file_okay=False),
                            default=None, help="Data directory (defaults to the bundled fixtures).")
_config_option = click.option("--config", "config_path", type=click.Path(exists=True),
                              default=None, help="JSON config file.")


@main.command()
@click.argument("file", type=click.File("r", encoding="utf-8"))
@_data_option
@_config_option
def parse(file, data, config_path):
    """Parse FILE and print its canonical serialization."""
    try:
        engine = _engine(data, config_path)
        content = parse_content(file.read())
        click.echo(serialize_content(content, engine.catalog))
    except AbstextError as exc:
        _fail(exc)


@main.command()
@click.argument("file", type=click.File("r", encoding="utf-8"))
@_data_option
@_config_option
def validate(file, data, config_path):
    """Validate FILE against the constructor catalog."""
    try:
        engine = _engine(data, config_path)
        content = parse_content(file.read())
    except AbstextError as exc:
        _fail(exc)
    diagnostics = engine.validate(content)
    if diagnostics:
        _echo_diagnostics(diagnostics)
        sys.exit(_EXIT_DIAGNOSTICS)
    click.echo("ok")


@main.command()
@click.argument("file", type=click.File("r", encoding="utf-8"))
@click.option("--lang", required=True, help="Language to render into.")
@_data_option
@_config_option
def render(file, lang, data, config_path):
    """Render FILE and print the text; omissions go to stderr."""
    try:
        engine = _engine(data, config_path)
        content = parse_content(file.read())
        outcome = engine.render(content, lang)
    except AbstextError as exc:
        _fail(exc)
    for omission in outcome.omissions:
        click.echo(f"omitted {omission.path}: {omission.reason}", err=True)
    click.echo(outcome.text)


@main.command("eval")
@click.argument("fn_id")
@click.argument("args", nargs=-1)
@_data_option
@_config_option
def eval_fn(fn_id, args, data, config_path):
    """Evaluate FN_ID on ARGS (each argument in value notation)."""
    try:
        engine = _engine(data, config_path)
        values = [parse_value_text(a) for a in args]
        result = engine.evaluate(fn_id, values)
    except AbstextError as exc:
        _fail(exc)
    try:
        click.echo(serialize_value(result))
    except AbstextError:
        from .codec import to_jsonable
        click.echo(json.dumps(to_jsonable(result), ensure_ascii=False))


@main.command()
@click.option("--host", default=None)
@click.option("--port", type=int, default=None)
@_data_option
@_config_option
def serve(host, port, data, config_path):
    """Run the HTTP service."""
    import uvicorn

    from .service import create_app

    config = load_config(config_path)
    engine = Engine(data_dir=data, config=config)
    uvicorn.run(create_app(engine),
                host=host or config.host, port=port or config.port)


@main.command("import")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@_data_option
@_config_option
def import_items(file, data, config_path):
    """Import items from a JSON document (a list or a single item)."""
    try:
        engine = _engine(data, config_path)
        with open(file, encoding="utf-8") as f:
            docs = json.load(f)
        if isinstance(docs, dict):
            docs = [docs]
        if not isinstance(docs, list):
            raise AbstextError("PARSE_ERROR", "item import wants an object or a list")
        count = 0
        for doc in docs:
            engine.put_item(doc)
            count += 1
        click.echo(str(count))
    except json.JSONDecodeError as exc:
        _fail(AbstextError("PARSE_ERROR", f"not valid JSON: {exc}"))
    except AbstextError as exc:
        _fail(exc)


if __name__ == "__main__":
    main()
