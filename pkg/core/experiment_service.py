import logging
import os

import numpy as np

from config.settings import ORACLE_DIRECT_MAX_DIM, ORACLE_MAX_KEPT_DIM, thread_count
from core import branch_model, oracle
from core.accessible_info import (
    accessible_mi,
    averaged_accessible_curve,
    biased_accessible_curve,
    draw_pvector,
    p_half_product,
    restrict_to_environment,
    subset_averaged_accessible_curve,
)
from core.csv_writer import CSVWriter
from core.entropy_core import LN2
from core.fraction_average import (
    averaged_curve,
    averaged_qmi_enumerated,
    ghz_junk_averaged_closed_form,
    scenario_curve,
)
from core.json_writer import JSONWriter
from core.objectivity_metrics import (
    consensus_from_curve,
    detect_plateau,
    redundancy_ghz_junk,
    redundancy_greedy,
    redundancy_mean,
)
from models.curve_model import ScenarioOrdering
from models.distribution_model import AveragingStrategy, DistributionKind, DrawPlan, PDistribution
from models.experiment_model import GhzJunkMode, IcnotMode
from models.overlap_model import FractionSelection, GhzJunkConfig, OverlapVector, PVector
from models.report_model import ObjectivityReport, RedundancyKind, ValidationCheck
from readers.curve_reader import read_curve
from readers.vector_reader import read_pvector

logger = logging.getLogger(__name__)

SCENARIO_KINDS = {
    GhzJunkMode.SCENARIO_A: "A",
    GhzJunkMode.SCENARIO_B: "B",
    GhzJunkMode.SCENARIO_C: "C",
}


class ExperimentService:
    """Runs one experiment end to end: curve, metrics, files."""

    def __init__(self, threads=None, progress_callback=None):
        self.threads = threads or thread_count()
        self.progress_callback = progress_callback  # Optional callback for progress updates

    def _progress(self, current, total):
        if self.progress_callback:
            self.progress_callback(current, total)

    def _plateau_fields(self, curve, s_system, normalize):
        plateau = detect_plateau(curve, s_system)
        level = plateau.level_normalized
        if level is not None and not normalize:
            level *= s_system
        return {
            "plateau_present": plateau.present,
            "plateau_start_l": plateau.start_l,
            "plateau_end_l": plateau.end_l,
            "plateau_level": level,
            "plateau_level_unit": "normalized" if normalize else "nats",
        }

    def _write(self, cfg, curve, report):
        CSVWriter(cfg.out).write(curve)
        if cfg.out != "-":
            logger.info("curve written to %s (%d points)", cfg.out, len(curve.points))
        if report is not None and cfg.report:
            JSONWriter(cfg.report).write(report)
            if cfg.report != "-":
                logger.info("report written to %s", cfg.report)

    def _write_pvector(self, path, p):
        parent = os.path.dirname(path)
        if parent:
            os.makedirs(parent, exist_ok=True)
        with open(path, "w", encoding="utf-8") as f:
            f.write(p.to_text())
        logger.info("flip probabilities written to %s", path)

    def run_ghz_junk(self, cfg):
        """Averaged or scenario curve of the GHZ+junk state, plus its report."""
        model = GhzJunkConfig(n_total=cfg.n, n_correlated=cfg.m)
        ov = branch_model.ghz_junk_overlaps(model)
        if cfg.mode is GhzJunkMode.AVERAGED:
            curve = averaged_curve(ov, AveragingStrategy(stride=cfg.stride),
                                   threads=self.threads, count_full=cfg.count_full)
        else:
            ordering = ScenarioOrdering.builtin(SCENARIO_KINDS[cfg.mode], cfg.n, cfg.m)
            curve = scenario_curve(model, ordering)
        self._progress(1, 2)

        report = None
        if cfg.report:
            s_system = branch_model.system_entropy(ov)
            f0, consensus = consensus_from_curve(curve, s_system, cfg.threshold)
            report = ObjectivityReport(
                model="ghz_junk",
                n=cfg.n,
                m=cfg.m,
                threshold=cfg.threshold,
                f0=f0,
                consensus=consensus,
                redundancy=redundancy_ghz_junk(model),
                redundancy_kind=RedundancyKind.EXACT,
                mode=cfg.mode.value,
                system_entropy_nats=s_system,
                **self._plateau_fields(curve, s_system, cfg.normalize),
            )
        self._write(cfg, curve, report)
        self._progress(2, 2)
        return curve, report

    def _distribution(self, cfg):
        if cfg.dist is DistributionKind.FIXED:
            return PDistribution.fixed(read_pvector(cfg.p_file))
        if cfg.dist is DistributionKind.EXPONENTIAL:
            return PDistribution.exponential(cfg.rate)
        return PDistribution.flat()

    def run_icnot(self, cfg, seed):
        """Accessible-information curve of the iCNOT model for a resolved seed."""
        dist = restrict_to_environment(self._distribution(cfg), cfg.n)
        plan = DrawPlan(n_draws=cfg.samples, seed=seed)
        if cfg.mode is IcnotMode.AVERAGED:
            curve = averaged_accessible_curve(dist, cfg.n, plan, threads=self.threads)
        elif cfg.mode is IcnotMode.SUBSET:
            p = draw_pvector(dist, cfg.n, seed)
            if cfg.p_out:
                self._write_pvector(cfg.p_out, p)
            strategy = AveragingStrategy.sample(cfg.samples, seed)
            curve = subset_averaged_accessible_curve(p, strategy, threads=self.threads)
        else:
            curve = biased_accessible_curve(dist, cfg.n, plan, cfg.mode.value,
                                            threads=self.threads)
        self._progress(1, 3)

        report = None
        if cfg.report:
            f0, consensus = consensus_from_curve(curve, LN2, cfg.threshold)
            self._progress(2, 3)
            if cfg.mode is IcnotMode.SUBSET:
                redundancy = float(redundancy_greedy(p, cfg.threshold, cfg.order))
                redundancy_stderr = 0.0
            else:
                redundancy, redundancy_stderr = redundancy_mean(
                    dist, cfg.n, plan, cfg.threshold, cfg.order, threads=self.threads
                )
            report = ObjectivityReport(
                model="icnot",
                n=cfg.n,
                distribution=dist.describe(),
                threshold=cfg.threshold,
                f0=f0,
                consensus=consensus,
                redundancy=redundancy,
                redundancy_stderr=redundancy_stderr,
                redundancy_kind=RedundancyKind.GREEDY_LOWER_BOUND,
                seed=seed,
                n_draws=cfg.samples,
                mode=cfg.mode.value,
                system_entropy_nats=LN2,
                **self._plateau_fields(curve, LN2, cfg.normalize),
            )
        self._write(cfg, curve, report)
        self._progress(3, 3)
        return curve, report

    def run_report(self, cfg):
        """Consensus and plateau of a curve saved earlier."""
        curve = read_curve(cfg.curve, cfg.s_system, cfg.n)
        f0, consensus = consensus_from_curve(curve, cfg.s_system, cfg.threshold)
        plateau = detect_plateau(curve, cfg.s_system, cfg.level_tol)
        plateau_fields = plateau.model_dump(mode="json")
        if not cfg.normalize and plateau.level_normalized is not None:
            plateau_fields["level_nats"] = plateau.level_normalized * cfg.s_system
        summary = {
            "n": curve.n,
            "threshold": cfg.threshold,
            "f0": f0,
            "consensus": consensus,
            "system_entropy_nats": cfg.s_system,
            "plateau": plateau_fields,
        }
        JSONWriter(cfg.report or "-").write(summary)
        return summary

    def run_validate(self, cfg):
        """Closed forms against the brute-force oracle on random small instances."""
        rng = np.random.default_rng(cfg.seed)
        checks = {
            "qmi_exact_vs_oracle": ValidationCheck(name="qmi_exact_vs_oracle", tolerance=1e-9),
            "complement_closed_form": ValidationCheck(name="complement_closed_form", tolerance=1e-12),
            "complement_oracle": ValidationCheck(name="complement_oracle", tolerance=1e-8),
            "eq4_vs_enumeration": ValidationCheck(name="eq4_vs_enumeration", tolerance=1e-12),
            "accessible_vs_classical_mi": ValidationCheck(name="accessible_vs_classical_mi",
                                                          tolerance=1e-12),
            "accessible_vs_state_joint": ValidationCheck(name="accessible_vs_state_joint",
                                                         tolerance=1e-9),
            "accessible_below_qmi": ValidationCheck(name="accessible_below_qmi", tolerance=1e-9),
            "icnot_gates_vs_branches": ValidationCheck(name="icnot_gates_vs_branches",
                                                       tolerance=1e-12),
        }

        for case in range(cfg.cases):
            n = int(rng.integers(1, cfg.n_max + 1))
            ov = random_overlaps(rng, n)
            self._check_overlap_case(checks, ov, rng)
            p = PVector(probs=tuple(rng.random(n).tolist()))
            self._check_icnot_case(checks, p, rng)
            self._progress(case + 1, cfg.cases)

        for n in range(1, cfg.n_max + 1):
            for m in range(n + 1):
                model = GhzJunkConfig(n_total=n, n_correlated=m)
                ov = branch_model.ghz_junk_overlaps(model)
                for l in range(1, n):
                    closed = ghz_junk_averaged_closed_form(model, l, count_full=True)
                    enumerated, _ = averaged_qmi_enumerated(ov, l)
                    checks["eq4_vs_enumeration"].record(abs(closed - enumerated),
                                                        {"n": n, "m": m, "l": l})
        return list(checks.values())

    def explain_failure(self, check):
        """First failing inputs of a check plus the reduced spectra behind them."""
        detail = dict(check.first_failure or {})
        if "overlaps" in detail:
            sv = oracle.build_state_from_overlaps(OverlapVector(overlaps=tuple(detail["overlaps"])))
        elif "p" in detail:
            sv = oracle.build_state_icnot(PVector(probs=tuple(detail["p"])))
        else:
            return detail
        env = [k + 1 for k in detail.get("selection", [])]
        detail["system_spectrum"] = oracle.spectrum_report(oracle.partial_trace(sv, [0]))
        if env and 2 ** len(env) <= ORACLE_MAX_KEPT_DIM:
            detail["fraction_spectrum"] = oracle.spectrum_report(oracle.partial_trace(sv, env))
        return detail

    def _check_overlap_case(self, checks, ov, rng):
        sv = oracle.build_state_from_overlaps(ov)
        s_system = branch_model.system_entropy(ov)
        for l in range(ov.n + 1):
            sel = random_selection(rng, ov.n, l)
            rest = sel.complement(ov.n)
            inputs = {"overlaps": list(ov.overlaps), "selection": list(sel.indices)}
            exact = branch_model.qmi_exact(ov, sel)
            checks["qmi_exact_vs_oracle"].record(abs(exact - oracle.qmi_brute(sv, sel)), inputs)
            checks["complement_closed_form"].record(
                abs(exact + branch_model.qmi_exact(ov, rest) - 2 * s_system), inputs)

        if 2 ** sv.n_qubits > ORACLE_DIRECT_MAX_DIM:
            return
        sel = random_selection(rng, ov.n, int(rng.integers(0, ov.n + 1)))
        rest = sel.complement(ov.n)
        inputs = {"overlaps": list(ov.overlaps), "selection": list(sel.indices)}
        both = (oracle.qmi_brute(sv, sel, direct=True)
                + oracle.qmi_brute(sv, rest, direct=True))
        checks["complement_oracle"].record(
            abs(both - 2 * oracle.entropy_of(sv, [0], direct=True)), inputs)

    def _check_icnot_case(self, checks, p, rng):
        sel = random_selection(rng, p.n, int(rng.integers(0, p.n + 1)))
        inputs = {"p": list(p.probs), "selection": list(sel.indices)}
        acc = accessible_mi(p, sel)
        joint = oracle.three_outcome_joint(p_half_product(p, sel))
        checks["accessible_vs_classical_mi"].record(abs(acc - oracle.classical_mi_brute(joint)),
                                                    inputs)
        sv = oracle.build_state_icnot(p)
        state_joint = oracle.computational_joint(sv, sel)
        checks["accessible_vs_state_joint"].record(
            abs(acc - oracle.classical_mi_brute(state_joint)), inputs)
        qmi = branch_model.qmi_exact(branch_model.icnot_overlaps(p), sel)
        checks["accessible_below_qmi"].record(max(0.0, acc - qmi), inputs)
        gates = oracle.build_state_icnot(p, via_gates=True)
        checks["icnot_gates_vs_branches"].record(
            float(np.max(np.abs(gates.amplitudes - sv.amplitudes))), inputs)


def random_overlaps(rng, n):
    """Random overlap vector mixing perfect records, junk and partial overlaps."""
    values = rng.random(n)
    kind = rng.random(n)
    values[kind < 0.15] = 0.0
    values[kind > 0.85] = 1.0
    return OverlapVector(overlaps=tuple(values.tolist()))


def random_selection(rng, n, size):
    return FractionSelection(indices=tuple(sorted(rng.choice(n, size, replace=False).tolist())))
