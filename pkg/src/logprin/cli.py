"""Command line front end for the order reduction engine.

Every command reads one JSON problem file. Structured failures print a
machine readable record to stderr and exit with a code identifying the
failure class: 2 for parse or validation errors, 3 when no maximal
contact exists, 4 when the blowup budget runs out, 5 when an embedded
resolution is not synchronized, 1 for anything else.
"""

import json
import sys

import click

from .blowup import KummerCenter, blow_up, controlled_transform
from .calculus import monomial_saturation
from .engine import (format_invariant, invariant, order_reduce, principalize,
                     resolve_embedded, verify_tree)
from .errors import (DepthExceeded, EngineError, NoMaximalContact,
                     NotSynchronized, ParseError, ValidationError)
from .ring import Ideal
from .trace_io import (center_label, emit_dot, emit_trace, parse_problem,
                       render_trace)

EXIT_INPUT = 2
EXIT_NO_CONTACT = 3
EXIT_DEPTH = 4
EXIT_SYNC = 5

RESOLVE_FORMAT = "logprin-resolve"


@click.group()
def main():
    """Principalize ideals on affine toroidal charts by order reduction."""


def _exit_code(err):
    if isinstance(err, (ParseError, ValidationError)):
        return EXIT_INPUT
    if isinstance(err, NoMaximalContact):
        return EXIT_NO_CONTACT
    if isinstance(err, DepthExceeded):
        return EXIT_DEPTH
    if isinstance(err, NotSynchronized):
        return EXIT_SYNC
    return 1


def _guard(body):
    try:
        body()
    except EngineError as err:
        click.echo(json.dumps(err.record(), sort_keys=True), err=True)
        sys.exit(_exit_code(err))


def _load(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as err:
        click.echo(json.dumps({"error": "IOError", "message": str(err)}),
                   err=True)
        sys.exit(EXIT_INPUT)
    return parse_problem(text)


def _write(path, text):
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as err:
        click.echo(json.dumps({"error": "IOError", "message": str(err)}),
                   err=True)
        sys.exit(1)


def _level(spec, quiet, verbose):
    if quiet:
        return 0
    if verbose:
        return 2
    return max(spec.verbosity, 1)


def _apply_depth(spec, max_depth):
    if max_depth is not None:
        spec.config.max_blowups = int(max_depth)


def _pullback_ideal(leaf):
    return leaf.transform.multiply_poly(leaf.accumulated)


def _report(tree, level):
    if level <= 0:
        return
    if level >= 2:
        for node in tree.nodes:
            if node.invariant is None:
                inv = "?"
            else:
                inv = format_invariant(node.invariant)
            line = "{}{} {} {}".format("  " * node.depth, node.chart.name,
                                       inv, node.status)
            if node.step is not None:
                parent = tree.node(node.parent_id)
                line += "  [{} {}]".format(
                    node.step.kind,
                    center_label(node.step.center, parent.chart))
            click.echo(line)
    click.echo("{} nodes, {} blowups, {} leaves".format(
        len(tree.nodes), tree.blowup_count, len(tree.leaves())))
    for leaf in tree.leaves():
        click.echo("  {}: {}, pullback ({})".format(
            leaf.chart.name, leaf.status,
            ", ".join(_pullback_ideal(leaf).basis_strings())))


def _emit_outputs(tree, trace_path, dot_path):
    if trace_path:
        _write(trace_path, emit_trace(tree))
    if dot_path:
        _write(dot_path, emit_dot(tree))


def _tree_command(problem, trace_path, dot_path, max_depth, quiet, verbose,
                  run):
    def body():
        spec = _load(problem)
        _apply_depth(spec, max_depth)
        tree = run(spec)
        verify_tree(tree)
        _emit_outputs(tree, trace_path, dot_path)
        _report(tree, _level(spec, quiet, verbose))
    _guard(body)


def _tree_options(fn):
    for deco in (
            click.option("--verbose", "-v", is_flag=True,
                         help="print every node of the tree"),
            click.option("--quiet", "-q", is_flag=True,
                         help="suppress the run report"),
            click.option("--max-depth", type=int, default=None,
                         help="override the blowup budget"),
            click.option("--dot", "dot_path", type=str, default=None,
                         help="write a GraphViz rendering of the tree"),
            click.option("--trace", "trace_path", type=str, default=None,
                         help="write the JSON trace of the tree"),
            click.argument("problem"),
    ):
        fn = deco(fn)
    return fn


@main.command("principalize")
@_tree_options
def cmd_principalize(problem, trace_path, dot_path, max_depth, quiet,
                     verbose):
    """Blow up until the pullback is the exceptional monomial."""
    _tree_command(problem, trace_path, dot_path, max_depth, quiet, verbose,
                  lambda spec: principalize(spec.chart, spec.ideal,
                                            spec.config))


@main.command("order-reduce")
@_tree_options
def cmd_order_reduce(problem, trace_path, dot_path, max_depth, quiet,
                     verbose):
    """Reduce the marked ideal below its mark on every chart."""
    _tree_command(problem, trace_path, dot_path, max_depth, quiet, verbose,
                  lambda spec: order_reduce(spec.chart, spec.marked(),
                                            spec.config))


@main.command("clean")
@click.argument("problem")
def cmd_clean(problem):
    """Print the monomial part and the cleaning blowup factorization."""
    def body():
        spec = _load(problem)
        chart = spec.chart
        if spec.ideal.is_zero():
            click.echo("M(I) = (0)")
            return
        sat = monomial_saturation(chart, spec.ideal)
        monos = Ideal(chart.ring,
                      [chart.monomial_poly(v) for v in sat]).basis_strings()
        click.echo("M(I) = ({})".format(", ".join(monos)))
        if monos == ["1"]:
            click.echo("already clean")
            return
        center = KummerCenter((), sat, spec.mark)
        for bc in blow_up(chart, center):
            reduced = controlled_transform(bc, spec.gens, spec.mark)
            click.echo("{}: {} * ({})".format(
                bc.chart.name,
                bc.chart.ring.format(bc.exceptional ** spec.mark),
                ", ".join(reduced.basis_strings())))
    _guard(body)


@main.command("invariant")
@click.argument("problem")
@click.option("--k0", type=int, default=0, show_default=True,
              help="maximal contact coordinates already consumed")
def cmd_invariant(problem, k0):
    """Print the stage invariant of the marked ideal."""
    def body():
        spec = _load(problem)
        entries = invariant(spec.chart, spec.marked(), k0=k0,
                            config=spec.config)
        click.echo(format_invariant(entries))
    _guard(body)


@main.command("resolve")
@click.argument("problem")
@click.option("--trace", "trace_path", type=str, default=None,
              help="write the resolved charts as JSON")
@click.option("--codim", type=int, default=None,
              help="codimension of the subvariety (overrides the file)")
@click.option("--max-depth", type=int, default=None,
              help="override the blowup budget")
@click.option("--quiet", "-q", is_flag=True, help="suppress the report")
@click.option("--verbose", "-v", is_flag=True,
              help="print full chart presentations")
def cmd_resolve(problem, trace_path, codim, max_depth, quiet, verbose):
    """Resolve the subvariety cut out by the ideal."""
    def body():
        spec = _load(problem)
        _apply_depth(spec, max_depth)
        cd = codim if codim is not None else spec.codim
        if cd is None:
            raise ValidationError(
                "resolve needs a codimension, in the file or via --codim",
                path="$.codim")
        stage, charts = resolve_embedded(spec.chart, spec.ideal, cd,
                                         spec.config)
        if trace_path:
            doc = {
                "format": RESOLVE_FORMAT,
                "version": 1,
                "stage": stage,
                "codim": cd,
                "charts": [ch.describe() for ch in charts],
            }
            _write(trace_path, render_trace(doc))
        if quiet:
            return
        click.echo("synchronized at stage {}".format(stage))
        for ch in charts:
            if verbose:
                click.echo("  {}".format(json.dumps(ch.describe())))
            else:
                click.echo("  {}".format(ch.name))
    _guard(body)


if __name__ == "__main__":
    main()
