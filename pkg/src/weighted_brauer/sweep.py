"""
Corpus sweep: every weight vector up to permutation with n+1 entries in [1, M].

Each vector is checked independently, optionally across worker processes;
results are aggregated in a DataFrame sorted by weight vector so the report
does not depend on scheduling.
"""
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import pandas as pd

from weighted_brauer.cech import build_double_complex, d2_map, e_pages, row_homology
from weighted_brauer.divisors import class_group, picard_index
from weighted_brauer.errors import InvalidInputError, WeightedBrauerError
from weighted_brauer.fan import build_fan
from weighted_brauer.utils.config import DEFAULT_SETTINGS
from weighted_brauer.weights import WeightVector, gcd_scale, satisfies_N, weight_corpus

logger = logging.getLogger(__name__)

CHECKS = ("rows_exact", "brauer_trivial", "d2_iso", "class_rank_one", "picard_lcm")
PROGRESS_EVERY = 100


def check_weight_vector(rho: tuple[int, ...]) -> dict:
    """Run every check on one vector; failures are recorded, never raised."""
    w = WeightVector(tuple(rho))
    _, normalized = gcd_scale(w)
    result = {
        "weights": list(w.rho),
        "normalized": list(normalized.rho),
        "well_formed": satisfies_N(normalized),
        "E2_01": None,
        "picard_index": None,
        **{check: False for check in CHECKS},
        "failures": [],
    }
    try:
        fan = build_fan(normalized)
        dc = build_double_complex(fan)
        pages = e_pages(dc)
        brauer = pages.group(2, 0, 1)
        index = picard_index(fan).index_in_class_group

        result["E2_01"] = str(brauer)
        result["picard_index"] = index
        result["rows_exact"] = all(g.is_trivial for g in row_homology(dc).values())
        result["brauer_trivial"] = brauer.is_trivial
        result["d2_iso"] = all(d2_map(pages, p).is_isomorphism for p in range(-1, fan.n - 1))
        result["class_rank_one"] = class_group(fan).group.free_rank == 1
        # the lcm statement is only made for well-formed weights
        result["picard_lcm"] = not result["well_formed"] or index == normalized.lcm
    except WeightedBrauerError as e:
        logger.error(f"Checks on {w} stopped: {e}")
        result["failures"].append(f"error: {e}")

    result["failures"].extend(check for check in CHECKS if not result[check])
    return result


@dataclass(frozen=True)
class SweepReport:
    dim: int
    max_weight: int
    frame: pd.DataFrame

    @property
    def checked(self) -> int:
        return len(self.frame)

    def _all(self, column: str) -> bool:
        return bool(self.frame[column].all())

    def failures(self) -> list[dict]:
        failed = self.frame[self.frame["failures"].map(len) > 0]
        return [
            {"weights": row.weights, "failed": list(row.failures)}
            for row in failed.itertuples(index=False)
        ]

    def payload(self) -> dict:
        return {
            "checked": self.checked,
            "dim": self.dim,
            "max_weight": self.max_weight,
            "all_brauer_trivial": self._all("brauer_trivial"),
            "all_d2_iso": self._all("d2_iso"),
            "all_rows_exact": self._all("rows_exact"),
            "all_picard_lcm": self._all("picard_lcm"),
            "all_class_rank_one": self._all("class_rank_one"),
            "failures": self.failures(),
        }

    def summary_table(self) -> str:
        view = self.frame.assign(weights=self.frame["weights"].map(tuple).map(str))
        columns = ["weights", "E2_01", "picard_index", "well_formed", *CHECKS]
        return view[columns].to_markdown(index=False)


def sweep(dim: int, max_weight: int, jobs: int = 1,
          chunksize: int = DEFAULT_SETTINGS["sweep_chunksize"]) -> SweepReport:
    """
    Check every weight vector of length dim+1 with entries at most max_weight.

    Args:
        dim: n ≥ 2
        max_weight: M ≥ 1
        jobs: Worker processes; 1 runs in-process
        chunksize: Vectors handed to a worker at a time

    Returns:
        SweepReport, independent of jobs
    """
    if dim < 2:
        raise InvalidInputError(f"Sweep dimension must be at least 2, got {dim}")
    if max_weight < 1:
        raise InvalidInputError(f"Maximum weight must be at least 1, got {max_weight}")
    if jobs < 1:
        raise InvalidInputError(f"jobs must be at least 1, got {jobs}")

    corpus = [w.rho for w in weight_corpus(dim, max_weight)]
    logger.info(f"Sweeping {len(corpus)} weight vectors (dim={dim}, max_weight={max_weight}, jobs={jobs})")

    results = []
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            for result in executor.map(check_weight_vector, corpus, chunksize=chunksize):
                results.append(result)
                if len(results) % PROGRESS_EVERY == 0:
                    logger.info(f"Checked {len(results)}/{len(corpus)}")
    else:
        for rho in corpus:
            results.append(check_weight_vector(rho))
            if len(results) % PROGRESS_EVERY == 0:
                logger.info(f"Checked {len(results)}/{len(corpus)}")

    results.sort(key=lambda r: tuple(r["weights"]))
    frame = pd.DataFrame(results)
    report = SweepReport(dim=dim, max_weight=max_weight, frame=frame)
    logger.info(f"Sweep finished: {report.checked} checked, {len(report.failures())} with failures")
    return report
