"""
torus-reciprocal - command-line interface
"""
import argparse
import logging
import math
import sys
from typing import Dict, List, Optional, Tuple

import numpy as np

from config import TorusConfig
from config_manager import get_config_manager
from document_io import (document_to_graph, graph_to_document, load_document,
                         save_document, serialize_document)
from drawing_analysis import analyze_drawing
from export import ReportExporter
from instances import builtin_instance, default_stress_name
from models import (DocumentError, NoReciprocalTorus, ReciprocalMode, StressVector,
                    TorusGraph, TorusGraphError)
from reciprocal import (build_dual_drawing, dual_stress, force_torus, torus_family,
                        verify_reciprocal)
from render import RenderOptions, render_svg, save_svg
from stress import covariance, is_equilibrium, stress_space
from torus_core import count_faces, validate
from utils import format_matrix, format_number, setup_logging, validate_numeric_input


class TorusReciprocalApp:
    """Command-line application: one subcommand per library operation"""

    def __init__(self, config_file: Optional[str] = None, debug: bool = False,
                 log_file: Optional[str] = None):
        self.config_manager = get_config_manager(config_file)
        level = self.config_manager.get("logging", "level", "INFO")
        if log_file is None and self.config_manager.get("logging", "file_enabled", False):
            log_file = self.config_manager.get("logging", "file_name")
        self.logger = setup_logging(debug or level == "DEBUG", log_file)
        for issue in self.config_manager.validate_config():
            self.logger.warning(f"Configuration issue: {issue}")
        self.exporter = ReportExporter(self.config_manager.get("export", "include_timestamps", True))

    # Loading

    def _load(self, path: str) -> Tuple[TorusGraph, Dict[str, np.ndarray], Optional[str]]:
        document = load_document(path)
        graph, stresses = document_to_graph(document)
        return graph, stresses, document.name

    def _stress(self, path: str, name: Optional[str]) -> Tuple[TorusGraph, np.ndarray, str]:
        document = load_document(path)
        graph, stresses = document_to_graph(document)
        name = name or default_stress_name(document)
        if name not in stresses:
            raise DocumentError(f"No stress table '{name}' in {path}; available: {sorted(stresses)}")
        return graph, stresses[name], name

    def _export_report(self, path: Optional[str], title: str, summary, sections) -> bool:
        if not path:
            return True
        if not self.exporter.export(path, title, summary, sections):
            print(f"Could not write report to {path}", file=sys.stderr)
            return False
        return True

    # Commands

    def _cmd_validate(self, args) -> int:
        document = load_document(args.file)
        graph, _ = document_to_graph(document)
        report = validate(graph, args.tol)
        if report.is_valid:
            print(f"valid: V={graph.num_vertices} E={graph.num_edges} F={count_faces(graph)}")
        else:
            for violation in report.violations:
                print(f"violation: {violation}")
        summary = {"file": args.file, "valid": report.is_valid, "violations": len(report.violations)}
        exported = self._export_report(args.report, "Validation report", summary,
                                       {"violations": report.to_frame()})
        return TorusConfig.EXIT_OK if report.is_valid and exported else TorusConfig.EXIT_FAILURE

    def _cmd_covariance(self, args) -> int:
        graph, weights, _ = self._stress(args.file, args.stress)
        cov = covariance(graph, weights)
        print(f"alpha={format_number(cov.alpha)} beta={format_number(cov.beta)} "
              f"gamma={format_number(cov.gamma)} det={format_number(cov.determinant)}")
        print(format_matrix(cov.matrix))
        return TorusConfig.EXIT_OK

    def _cmd_equilibrium(self, args) -> int:
        graph, weights, name = self._stress(args.file, args.stress)
        result = is_equilibrium(graph, weights, tol=args.tol)
        verdict = "yes" if result.is_equilibrium else "no"
        print(f"equilibrium={verdict} max_residual={result.max_residual:.3g} stress={name}")
        return TorusConfig.EXIT_OK if result.is_equilibrium else TorusConfig.EXIT_IMPOSSIBLE

    def _cmd_stress_basis(self, args) -> int:
        document = load_document(args.file)
        graph, _ = document_to_graph(document)
        cutoff = self.config_manager.get("numerics", "svd_cutoff", TorusConfig.SVD_CUTOFF)
        basis = stress_space(graph, cutoff)
        for i, vector in enumerate(basis):
            document.stresses[f"{args.prefix}{i}"] = [float(x) for x in vector]
        target = args.out or args.file
        save_document(document, target)
        print(f"stress space dimension {len(basis)}; basis written to {target}")
        return TorusConfig.EXIT_OK

    def _cmd_reciprocal(self, args) -> int:
        graph, weights, name = self._stress(args.file, args.stress)
        mode = ReciprocalMode(args.mode)
        family = torus_family(graph, weights, mode, args.tol)
        if isinstance(family, NoReciprocalTorus):
            print(f"no reciprocal torus: {family.reason}")
            return TorusConfig.EXIT_IMPOSSIBLE

        if family.rescaled:
            print(f"stress '{name}' rescaled by {format_number(family.scale_factor)}")
        if mode is ReciprocalMode.ORTHOGONAL:
            primal_torus = family.instantiate(args.sigma, math.radians(args.angle))
            print(f"family: M = sigma R {format_matrix(family.base)}")
        else:
            primal_torus = graph.torus
            print("family: any nonsingular M")
        primal = graph.with_torus(primal_torus)
        print(f"primal torus: {format_matrix(primal_torus.basis)}")

        dual = build_dual_drawing(primal, family.stress, mode,
                                  homology_tol=self.config_manager.get("numerics", "homology_tol",
                                                                       TorusConfig.HOMOLOGY_TOL))
        report = verify_reciprocal(primal, dual, family.stress, args.tol)
        print(f"dual torus: {format_matrix(dual.graph.torus.basis)}")
        print(f"verification: {'passed' if report.passes else 'failed'} "
              f"max_violation={report.max_violation:.3g} "
              f"same_lattice={'yes' if report.same_lattice else 'no'} "
              f"reciprocal={'yes' if report.is_reciprocal else 'no'}")

        if args.out:
            save_document(graph_to_document(dual.graph, {"dual": dual_stress(family.stress)},
                                            name=f"{graph.name or 'graph'}_dual"), args.out)
        if args.primal_out:
            save_document(graph_to_document(primal, {name: family.stress}, name=graph.name or None),
                          args.primal_out)
        summary = {"mode": mode.value, "stress": name, "scale": family.scale_factor,
                   "passes": report.passes, "max_violation": report.max_violation,
                   "same_lattice": report.same_lattice,
                   "is_reciprocal": report.is_reciprocal}
        exported = self._export_report(args.report, "Reciprocal diagram report", summary,
                                       {"violations": report.to_frame()})
        return TorusConfig.EXIT_OK if report.passes and exported else TorusConfig.EXIT_FAILURE

    def _cmd_force_torus(self, args) -> int:
        graph, weights, _ = self._stress(args.file, args.stress)
        torus = force_torus(graph, StressVector(weights), ReciprocalMode(args.mode), args.tol)
        print(format_matrix(torus.basis))
        return TorusConfig.EXIT_OK

    def _cmd_analyze(self, args) -> int:
        graph, _, _ = self._load(args.file)
        report = analyze_drawing(graph, args.tol)
        for key, count in report.summary().items():
            print(f"{key}={count}")
        print(f"embedding={'yes' if report.is_empty else 'no'}")
        exported = self._export_report(args.report, "Drawing analysis", report.summary(),
                                       {"degeneracies": report.to_frame()})
        if not exported:
            return TorusConfig.EXIT_FAILURE
        return TorusConfig.EXIT_OK if report.is_empty else TorusConfig.EXIT_IMPOSSIBLE

    def _cmd_render(self, args) -> int:
        graph, _, _ = self._load(args.file)
        render = self.config_manager.get_section("render")
        options = RenderOptions(tile=args.tile or render.get("tile", 3),
                                scale=render.get("scale", 300.0),
                                labels=args.labels or render.get("labels", False),
                                stroke_width=render.get("stroke_width", 1.5))
        if args.dual:
            options.overlay, _, _ = self._load(args.dual)
        options.highlight = analyze_drawing(options.overlay or graph, args.tol)
        save_svg(render_svg(graph, options), args.output)
        print(f"SVG written to {args.output}")
        return TorusConfig.EXIT_OK

    def _cmd_instance(self, args) -> int:
        document = builtin_instance(args.name)
        if args.output:
            save_document(document, args.output)
            print(f"Instance {args.name} written to {args.output}")
        else:
            sys.stdout.write(serialize_document(document))
        return TorusConfig.EXIT_OK

    def _cmd_config(self, args) -> int:
        if args.sample:
            return TorusConfig.EXIT_OK if self.config_manager.create_sample_config(args.sample) \
                else TorusConfig.EXIT_FAILURE
        for section in ("numerics", "render", "export", "logging"):
            for key, value in self.config_manager.get_section(section).items():
                print(f"{section}.{key}={value}")
        issues = self.config_manager.validate_config()
        for issue in issues:
            print(f"issue: {issue}")
        return TorusConfig.EXIT_FAILURE if issues else TorusConfig.EXIT_OK

    # Entry

    def run(self, args: argparse.Namespace) -> int:
        handler = getattr(self, "_cmd_" + args.command.replace("-", "_"))
        try:
            return handler(args)
        except (TorusGraphError, OSError) as e:
            self.logger.debug("Command failed", exc_info=True)
            print(f"error: {e}", file=sys.stderr)
            return TorusConfig.EXIT_FAILURE


def _positive_float(text: str) -> float:
    value = validate_numeric_input(text, "value")
    if value <= 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return value


def build_parser(default_tol: float = TorusConfig.ABS_TOL) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="torus-reciprocal",
        description="Reciprocal diagrams of geodesic graphs on flat tori")
    parser.add_argument("--debug", action="store_true", help="debug logging")
    parser.add_argument("--config", help="JSON configuration file")
    parser.add_argument("--log-file", help="also write the log to this file")
    parser.add_argument("--tol", type=_positive_float, default=default_tol,
                        help=f"absolute tolerance (default {default_tol:g})")
    commands = parser.add_subparsers(dest="command", required=True)

    def with_stress(p):
        p.add_argument("file")
        p.add_argument("--stress", help="stress table name")
        return p

    def with_mode(p):
        p.add_argument("--mode", choices=[m.value for m in ReciprocalMode], required=True)
        return p

    p = commands.add_parser("validate", help="check the torus graph invariants")
    p.add_argument("file")
    p.add_argument("--report", help="write the report (.csv, .xlsx or text)")

    with_stress(commands.add_parser("covariance", help="print alpha, beta, gamma and the covariance matrix"))
    with_stress(commands.add_parser("equilibrium", help="test a stress for equilibrium"))

    p = commands.add_parser("stress-basis", help="append a basis of equilibrium stresses")
    p.add_argument("file")
    p.add_argument("--out", help="write here instead of updating FILE")
    p.add_argument("--prefix", default="basis_", help="stress table name prefix")

    p = with_mode(with_stress(commands.add_parser("reciprocal", help="build and verify a reciprocal diagram")))
    p.add_argument("--sigma", type=_positive_float, default=1.0, help="family scale (orthogonal)")
    p.add_argument("--angle", type=float, default=0.0, help="family rotation in degrees (orthogonal)")
    p.add_argument("--out", help="write the dual drawing document")
    p.add_argument("--primal-out", help="write the primal document on the family torus")
    p.add_argument("--report", help="write the verification report (.csv, .xlsx or text)")

    with_mode(with_stress(commands.add_parser("force-torus", help="print the torus of the force diagram")))

    p = commands.add_parser("analyze", help="look for coincidences, crossings and overlaps")
    p.add_argument("file")
    p.add_argument("--report", help="write the report (.csv, .xlsx or text)")

    p = commands.add_parser("render", help="draw the graph as SVG")
    p.add_argument("file")
    p.add_argument("--dual", help="dual drawing document to overlay")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--tile", type=int, help="copies of the torus per side")
    p.add_argument("--labels", action="store_true", help="label vertices")

    p = commands.add_parser("instance", help="write a built-in instance")
    p.add_argument("name", help="k7_uniform, k7_weird, k7_negative or grid_<n>")
    p.add_argument("-o", "--output")

    p = commands.add_parser("config", help="show the effective configuration")
    p.add_argument("--sample", help="write a sample configuration file")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Entry point; returns the exit code"""
    argv = sys.argv[1:] if argv is None else argv
    try:
        preliminary, _ = build_parser().parse_known_args(argv)
    except SystemExit as e:
        return TorusConfig.EXIT_OK if e.code in (0, None) else TorusConfig.EXIT_FAILURE
    app = TorusReciprocalApp(preliminary.config, preliminary.debug, preliminary.log_file)
    default_tol = app.config_manager.get("numerics", "abs_tol", TorusConfig.ABS_TOL)
    try:
        args = build_parser(default_tol).parse_args(argv)
    except SystemExit as e:
        return TorusConfig.EXIT_OK if e.code in (0, None) else TorusConfig.EXIT_FAILURE
    logging.getLogger(__name__).debug(f"Running {args.command}")
    return app.run(args)


if __name__ == "__main__":
    sys.exit(main())
