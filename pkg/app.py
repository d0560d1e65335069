"""
Tree Distiller - command line interface
Main entry point for training, evaluation and tree export
"""
import functools
import sys
from pathlib import Path

import click
from rich.markup import escape

# Add src directory to Python path
SRC_DIR = Path(__file__).parent / "src"
if str(SRC_DIR) not in sys.path:
    sys.path.insert(0, str(SRC_DIR))

from runner import (
    export_tree_text,
    load_run_config,
    run_ablate,
    run_compare,
    run_crossplay,
    run_evaluate,
    run_exploitability,
    run_train
)
from utils.config import validate_artifact_root, validate_log_level
from utils.errors import ConfigError, DistillerError
from utils.log import configure_logging, console

EXIT_CONFIG = 2
EXIT_RUNTIME = 3


def validate_system():
    """Validate environment-level configuration"""
    try:
        validate_log_level()
        validate_artifact_root()
        return True, "✅ System validated successfully"
    except Exception as e:
        return False, f"❌ Validation failed: {str(e)}"


def handle_errors(command):
    """Map distiller errors to exit codes: 2 for configuration, 3 for everything else"""
    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except ConfigError as e:
            console.print(f"❌ Configuration error: {escape(str(e))}")
            sys.exit(EXIT_CONFIG)
        except (click.ClickException, click.exceptions.Exit, click.Abort):
            raise
        except DistillerError as e:
            console.print(f"❌ {type(e).__name__}: {escape(str(e))}")
            sys.exit(EXIT_RUNTIME)
        except Exception as e:
            console.print(f"❌ Error: {escape(str(e))}")
            sys.exit(EXIT_RUNTIME)
    return wrapper


config_option = click.option('--config', 'config_path', type=click.Path(dir_okay=False),
                             help='TOML run configuration')
set_option = click.option('--set', 'overrides', multiple=True, metavar='SECTION.KEY=VALUE',
                          help='Override one configuration value (repeatable)')
out_option = click.option('--out', type=click.Path(dir_okay=False), help='CSV output path')


@click.group()
@click.option('--log-level', default=None, help='Log level, default TREE_DISTILLER_LOG_LEVEL')
def cli(log_level):
    """Extract decision-tree policies from multi-agent experts."""
    configure_logging(log_level)


@cli.command()
@config_option
@set_option
@click.option('--run-dir', type=click.Path(file_okay=False), help='Write into this directory')
@handle_errors
def train(config_path, overrides, run_dir):
    """Train the configured algorithm and write a run directory."""
    is_valid, message = validate_system()
    if not is_valid:
        raise ConfigError(message)
    cfg = load_run_config(config_path, overrides)
    path = run_train(cfg, overrides, run_dir=run_dir)
    click.echo(str(path))


@cli.command()
@config_option
@set_option
@click.option('--artifacts', type=click.Path(file_okay=False), help='Run directory to evaluate')
@out_option
@handle_errors
def evaluate(config_path, overrides, artifacts, out):
    """Individual and joint performance ratios."""
    cfg = load_run_config(config_path, overrides)
    table = run_evaluate(cfg, artifacts, out)
    click.echo(f"{len(table)} rows")


@cli.command()
@config_option
@set_option
@click.option('--artifacts', multiple=True, type=click.Path(file_okay=False), help='Run directory (repeatable)')
@out_option
@handle_errors
def crossplay(config_path, overrides, artifacts, out):
    """Cross-play matrix between the expert and the given runs."""
    cfg = load_run_config(config_path, overrides)
    table = run_crossplay(cfg, list(artifacts), out)
    click.echo(f"{len(table)} cells")


@cli.command()
@config_option
@set_option
@click.option('--artifacts', type=click.Path(file_okay=False), help='Run directory, default the expert')
@out_option
@handle_errors
def exploitability(config_path, overrides, artifacts, out):
    """Exact best-response exploitability of each team."""
    cfg = load_run_config(config_path, overrides)
    table = run_exploitability(cfg, artifacts, out)
    click.echo(f"{len(table)} rows")


@cli.command()
@config_option
@set_option
@out_option
@handle_errors
def ablate(config_path, overrides, out):
    """MAVIPER ablations next to IVIPER on shared seeds."""
    cfg = load_run_config(config_path, overrides)
    table = run_ablate(cfg, out)
    click.echo(f"{len(table)} rows")


@cli.command()
@config_option
@set_option
@out_option
@handle_errors
def compare(config_path, overrides, out):
    """MAVIPER, IVIPER and Fitted Q joint metrics with a paired MAVIPER - IVIPER interval."""
    cfg = load_run_config(config_path, overrides)
    table = run_compare(cfg, out)
    click.echo(f"{len(table)} rows")


@cli.command('export-tree')
@click.option('--tree', 'tree_path', required=True, type=click.Path(dir_okay=False), help='Policy JSON file')
@click.option('--format', 'fmt', type=click.Choice(['json', 'dot']), default='json', show_default=True)
@handle_errors
def export_tree(tree_path, fmt):
    """Print a saved tree as canonical JSON or DOT."""
    click.echo(export_tree_text(tree_path, fmt), nl=False)


def main():
    cli()


if __name__ == "__main__":
    main()
