# core/backend/services/pipelines.py

"""
pipelines.py

Конвейеры по видам сценариев. Каждый получает разобранный файл сценария и
RunContext (окно, обрезка рядов) и возвращает Report.

Математические несоответствия становятся проваленными проверками в отчёте;
некорректные данные сценария пробрасываются исключениями модулей
(их классифицирует scenario_service).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from core.backend.algebra.koszul import BigradedDimsTable, Window
from core.backend.algebra.linalg import series_truncate
from core.backend.cli.schemas import (
    CharacterIn,
    CheckResult,
    Fact,
    KirwanFile,
    LagrangianFile,
    LagrangianIn,
    LocalsysFile,
    LocusBlock,
    Report,
    SeriesBlock,
    TableBlock,
    parse_rational,
)
from core.backend.geometry.kirwan import (
    CertificateFailed,
    TorusRepresentation,
    atiyah_bott_certificate,
    cotangent_representation,
    hkkn_stratification,
    kkt_holds,
    morse_equality_check,
    optimal_destabilizer,
    semistable_locus,
    stratum_poincare_series,
)
from core.backend.geometry.lagrangian import (
    Character,
    CheckFailed,
    DegenerateHessian,
    LagrangianDescriptor,
    ScenarioFlags,
    SymplecticModel,
    build_scenario,
    canonical_char_check,
    compare_with_oracle,
    equivariant_ext_dims,
    hessian_torsion_check,
)
from core.backend.geometry.localsys import (
    MonodromyData,
    SimplicialModel,
    check_cocycle,
    covering_decomposition_check,
    euler_characteristic,
    gauge_transform,
    grid_torus,
    point,
    seam_monodromy,
    triangle_circle,
    twisted_cohomology,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RunContext:
    homological: int
    internal: int
    truncate: int

    @property
    def window(self) -> Window:
        return Window(self.homological, self.internal)


def table_block(name: str, table: BigradedDimsTable) -> TableBlock:
    d_values = list(range(table.d_range[0], table.d_range[1] + 1))
    return TableBlock(name=name, d_values=d_values, rows=[(k, row) for k, row in table.to_rows()])


def _fmt_vector(v: Sequence) -> str:
    return "(" + ", ".join(str(Fraction(x)) for x in v) + ")"


# ------------------ лагранжевы пересечения ------------------ #

def _descriptor(src: LagrangianIn) -> LagrangianDescriptor:
    basis = tuple(
        tuple((name, parse_rational(val)) for name, val in sorted(vec.items()))
        for vec in src.basis
    )
    return LagrangianDescriptor(
        kind=src.kind,
        potential=src.potential,
        components=tuple(src.components),
        vanishing=tuple(src.vanishing),
        basis=basis,
    )


def _character(src: Optional[CharacterIn], rank: int) -> Optional[Character]:
    if src is None:
        return None
    weight = tuple(src.weight) if src.weight else tuple(0 for _ in range(rank))
    if len(weight) != rank:
        raise ValueError(f"Характер {src.weight} не согласован с рангом тора {rank}")
    return Character(src.internal, weight)


def run_lagrangian(scn: LagrangianFile, ctx: RunContext) -> Report:
    body = scn.body
    model = SymplecticModel.cotangent(
        body.base,
        base_degrees=body.base_degrees,
        fiber_degrees=body.fiber_degrees,
        base_weights=body.weights,
    )
    rank = model.ring.torus_rank
    level = [parse_rational(v) for v in body.level] if body.level is not None else None
    s = build_scenario(
        model,
        _descriptor(body.l1),
        _descriptor(body.l2),
        f1=_character(body.f1, rank),
        f2=_character(body.f2, rank),
        spin=body.spin,
        flags=ScenarioFlags(scn.flags.proper_over_affine, scn.flags.finite_invariants),
        level=level,
    )
    window = ctx.window
    report = Report(name=scn.name, kind=scn.kind)

    facts = [
        ("B", s.describe_b()),
        ("dim B", str(s.dim_b)),
        ("m = codim(B, C2)", str(s.m)),
        ("m' = codim(B, C1)", str(s.m1)),
        ("excess rank", str(s.excess_rank)),
        ("det N_B/C2", s.det_n_b_c2.as_text()),
        ("K_C1", s.k_c1.as_text()),
        ("K_C2", s.k_c2.as_text()),
        ("twist F1^v F2", s.twist.as_text()),
    ]
    if rank:
        facts.append(("moment", _fmt_vector(s.moment)))
        facts.append(("rank G", str(rank)))
        facts.append(("reduced dimension", str(s.reduced_dimension)))
    report.facts.extend(Fact(key=k, value=v) for k, v in facts)

    oracle = compare_with_oracle(s, window)
    for check in oracle.checks:
        if check.name.startswith("closed_form_ext") and not s.flags.proper_over_affine:
            continue
        if check.name == "equivariant_ext_vs_point" and not s.flags.finite_invariants:
            continue
        report.checks.append(CheckResult(name=check.name, ok=check.ok, detail=check.note,
                                         mismatches=list(check.mismatches)))
        if check.name == "tor_vs_wedge_excess":
            report.tables.append(table_block("tor", check.left))
            report.tables.append(table_block("wedge_excess", check.right))
        elif check.name == "tate_vs_sym_two_term":
            report.tables.append(table_block("tate", check.left))
            report.tables.append(table_block("sym_two_term", check.right))
        elif check.name.startswith("closed_form_ext_"):
            orientation = check.name.rsplit("_", 1)[1]
            report.tables.append(table_block(f"ext_{orientation}", check.left))

    if not s.flags.proper_over_affine:
        report.facts.append(Fact(key="closed-form Ext", value="skipped (proper_over_affine = false)"))

    try:
        cert = canonical_char_check(s)
        detail = "; ".join(f"{name} {c.as_text()}" for name, c in cert.summands)
        report.checks.append(CheckResult(name="canonical_character", ok=True, detail=detail))
    except CheckFailed as e:
        report.checks.append(CheckResult(name="canonical_character", ok=False, detail=str(e)))

    if "graph" in (body.l1.kind, body.l2.kind):
        try:
            h = hessian_torsion_check(s)
            detail = (
                f"rank {h.rank} = codim {h.codim} over O_B (unit minor {h.unit_minor}); "
                f"det N^2 {h.det_normal_squared.as_text()} + omega^{h.codim} {h.hessian_character.as_text()} = 0"
            )
            report.checks.append(CheckResult(name="hessian_torsion", ok=True, detail=detail))
        except (DegenerateHessian, CheckFailed) as e:
            report.checks.append(CheckResult(name="hessian_torsion", ok=False, detail=str(e)))

    if rank and s.flags.finite_invariants:
        for orientation in ("c2", "c1"):
            eq = equivariant_ext_dims(s, window, orientation)
            report.tables.append(table_block(f"equivariant_ext_{orientation}", eq.table))
            totals = eq.per_total_degree()
            report.series.append(SeriesBlock(
                name=f"equivariant_ext_{orientation}_totals",
                coefficients=[totals.get(n, 0) for n in range(window.homological + 1)],
            ))
    return report


# ------------------ торическая GIT ------------------ #

def _direction_text(direction: Sequence[int]) -> str:
    return "(" + ",".join(str(x) for x in direction) + ")"


def _kirwan_section(rep: TorusRepresentation, prefix: str, locus_name: str,
                    orders: Sequence[int], truncate: int, report: Report) -> None:
    locus = semistable_locus(rep)
    report.loci.append(LocusBlock(
        name=locus_name,
        description=locus.description,
        supports=[list(s) for s in locus.minimal_supports],
    ))

    strata = hkkn_stratification(rep)
    for st in strata:
        label = f"{prefix}stratum {_direction_text(st.direction)}"
        report.facts.append(Fact(
            key=label,
            value=f"beta {_fmt_vector(st.beta)}, r_beta {st.r_beta}, Z {list(st.z_indices)}, "
                  f"supports {[list(s) for s in st.supports]}",
        ))
        series = stratum_poincare_series(rep, st)
        report.series.append(SeriesBlock(name=label, coefficients=series_truncate(series, truncate)))
        try:
            cert = atiyah_bott_certificate(rep, st, orders)
            pairings = ", ".join(f"{rep.coordinate_name(i)}: {p}" for i, p in cert.normal_pairings)
            report.checks.append(CheckResult(
                name=f"{prefix}atiyah_bott {_direction_text(st.direction)}",
                ok=cert.ok,
                detail=f"normal pairings {pairings}; local systems of order {list(cert.local_system_orders)}",
            ))
        except CertificateFailed as e:
            report.checks.append(CheckResult(
                name=f"{prefix}atiyah_bott {_direction_text(st.direction)}", ok=False, detail=str(e),
            ))
    if not strata:
        cert = atiyah_bott_certificate(rep, None, orders)
        report.checks.append(CheckResult(name=f"{prefix}atiyah_bott", ok=cert.ok, detail="vacuous: no unstable points"))

    morse = morse_equality_check(rep, truncate)
    report.series.append(SeriesBlock(name=f"{prefix}residual", coefficients=morse.residual))
    report.checks.append(CheckResult(
        name=f"{prefix}morse_residual_nonnegative", ok=morse.nonnegative,
        detail=f"truncated to t^{truncate}",
    ))
    if morse.known is not None:
        report.checks.append(CheckResult(
            name=f"{prefix}morse_residual_known", ok=bool(morse.matches_known),
            detail=f"known {morse.known}",
        ))

    target = [-c for c in rep.chi]
    bad_kkt = []
    for s in sorted({tuple(sorted(x)) for st in strata for x in st.supports}):
        beta = optimal_destabilizer(rep, s)
        if not kkt_holds(target, [rep.weights[i] for i in s], beta):
            bad_kkt.append(s)
    report.checks.append(CheckResult(name=f"{prefix}kkt", ok=not bad_kkt,
                                     detail=f"failing supports {bad_kkt}" if bad_kkt else ""))

    scaled = rep.scaled(2)
    same_locus = semistable_locus(scaled).minimal_supports == locus.minimal_supports
    same_strata = [(st.direction, st.supports, st.r_beta) for st in hkkn_stratification(scaled)] == \
        [(st.direction, st.supports, st.r_beta) for st in strata]
    report.checks.append(CheckResult(name=f"{prefix}chi_scaling", ok=same_locus and same_strata))


def run_kirwan(scn: KirwanFile, ctx: RunContext) -> Report:
    body = scn.body
    rep = TorusRepresentation(
        body.rank,
        tuple(tuple(w) for w in body.weights),
        tuple(body.chi),
        tuple(body.names or ()),
    )
    report = Report(name=scn.name, kind=scn.kind)
    report.facts.append(Fact(key="weights", value=str([list(w) for w in rep.weights])))
    report.facts.append(Fact(key="chi", value=str(list(rep.chi))))
    _kirwan_section(rep, "", "M^ss", body.local_system_orders, ctx.truncate, report)
    if body.cotangent:
        cot = cotangent_representation(rep)
        report.facts.append(Fact(key="cotangent weights", value=str([list(w) for w in cot.weights])))
        _kirwan_section(cot, "cotangent:", "(T^vM)^ss", body.local_system_orders, ctx.truncate, report)
    return report


# ------------------ локальные системы ------------------ #

def _complex(scn: LocalsysFile) -> SimplicialModel:
    body = scn.body
    if body.complex == "circle":
        return triangle_circle()
    if body.complex == "torus":
        return grid_torus(body.size)
    if body.complex == "point":
        return point()
    k = SimplicialModel.from_facets(body.facets or [])
    k.check()
    return k


def _monodromy(scn: LocalsysFile) -> MonodromyData:
    mono = scn.body.monodromy
    if mono.seam_exponent is not None:
        return seam_monodromy(scn.body.size, mono.order, mono.seam_exponent)
    exponents: Dict[Tuple[int, int], int] = {}
    for u, v, k in mono.edges:
        if u == v:
            raise ValueError(f"Петля ({u}, {v}) не является ребром")
        key, val = ((u, v), k) if u < v else ((v, u), -k)
        exponents[key] = (exponents.get(key, 0) + val) % mono.order
    return MonodromyData(mono.order, exponents)


def _degree_list(dims: Dict[int, int], top: int) -> List[int]:
    return [dims.get(p, 0) for p in range(top + 1)]


def run_localsys(scn: LocalsysFile, ctx: RunContext) -> Report:
    k = _complex(scn)
    lsys = _monodromy(scn)
    edges = set(k.edges())
    for e in lsys.exponents:
        if e not in edges:
            raise ValueError(f"Ребро {e} отсутствует в комплексе")
    check_cocycle(k, lsys)

    report = Report(name=scn.name, kind=scn.kind)
    report.facts.extend([
        Fact(key="simplices", value=str([k.count(p) for p in range(k.dimension + 1)])),
        Fact(key="euler characteristic", value=str(euler_characteristic(k))),
        Fact(key="monodromy order", value=str(lsys.exact_order())),
    ])
    for j in range(lsys.order):
        dims = twisted_cohomology(k, lsys.power(j))
        report.series.append(SeriesBlock(name=f"H(K,L^{j})", coefficients=_degree_list(dims, k.dimension)))

    for n in scn.body.cover_orders:
        cov = covering_decomposition_check(k, lsys, n)
        report.series.append(SeriesBlock(name=f"H(cover n={n})", coefficients=_degree_list(cov.cover_dims, k.dimension)))
        report.checks.append(CheckResult(
            name=f"covering n={n}",
            ok=cov.ok,
            detail=f"cover {_degree_list(cov.cover_dims, k.dimension)}, "
                   f"sum {_degree_list(cov.summed, k.dimension)}, "
                   f"euler {cov.euler_cover} = {n}·{cov.euler_base}",
        ))

    if scn.body.gauge:
        h = {int(v): e for v, e in scn.body.gauge.items()}
        before = twisted_cohomology(k, lsys)
        after = twisted_cohomology(k, gauge_transform(k, lsys, h))
        report.checks.append(CheckResult(
            name="gauge_invariance", ok=before == after,
            detail=f"{_degree_list(before, k.dimension)} vs {_degree_list(after, k.dimension)}",
        ))
    return report
