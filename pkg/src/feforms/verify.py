"""The shipped verification suite: every claim at its standard desk-scale range.

Ranges: simplicial families n <= 3 (dimension spot checks at n = 4) and
r <= 4; box families n <= 3, r <= 3; dimension tables n <= 4, r <= 6;
homogeneous-form identities n <= 4, r <= 5; commuting projections and
assembly identities on the bundled sample meshes.

Certificates for distinct parameter tuples are independent; FEEC_MAX_THREADS
caps the worker pool (0 or unset picks a default).  Results are emitted in
task order, so reports are byte-identical across runs regardless of the
pool size.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

from feforms import complexes, dofs, mesh_assembly, spaces, tables
from feforms.complexes import Certificate
from feforms.forms import PolyForm
from feforms.spaces import make_spec


def _dims_certificates() -> list[Certificate]:
    certs = []
    for family in ("P", "Pminus"):
        mismatches = []
        ratio_failures = []
        checked = 0
        for n in range(1, 5):
            for r in range(1, 7):
                for k in range(n + 1):
                    spec = make_spec(family, n, r, k)
                    formula = spaces.dimension(spec, "formula")
                    rank = spaces.dimension(spec, "rank")
                    checked += 1
                    if formula != rank:
                        mismatches.append({"n": n, "r": r, "k": k,
                                           "formula": formula, "rank": rank})
                    if family == "Pminus":
                        # dim Pminus = r / (r + k) * dim P, exactly
                        full = spaces.dimension_P(n, r, k)
                        if formula * (r + k) != r * full:
                            ratio_failures.append({"n": n, "r": r, "k": k})
        witness = {"entries_checked": checked, "mismatches": mismatches}
        if family == "Pminus":
            witness["ratio_failures"] = ratio_failures
        ok = not mismatches and not ratio_failures
        certs.append(Certificate(f"dims:{family}", {"n_max": 4, "r_max": 6},
                                 "pass" if ok else "fail", witness))
    return certs


def _unisolvence_certificates() -> list[Certificate]:
    jobs = []
    for family, rmax in (("P", 4), ("Pminus", 4), ("Qminus", 3), ("S", 3)):
        for n in range(1, 4):
            for r in range(1, rmax + 1):
                for k in range(n + 1):
                    jobs.append(make_spec(family, n, r, k))
    # one spot check beyond the standard range
    jobs.append(make_spec("Pminus", 4, 1, 1))

    def run(spec):
        report = dofs.unisolvence_check(spec)
        ok = report["count_ok"] and report["determinant_nonzero"]
        return Certificate("unisolvence", spec.as_dict(),
                           "pass" if ok else "fail", report)

    return _parallel(run, jobs)


def _homotopy_certificates() -> list[Certificate]:
    jobs = [(n, r, k) for n in range(1, 5) for r in range(0, 6)
            for k in range(n + 1)]

    def run(args):
        return complexes.check_homotopy(*args)

    return _parallel(run, jobs)


def _exactness_certificates() -> list[Certificate]:
    certs = []
    for kind in ("P", "Pminus", "koszul"):
        for n in range(1, 4):
            for r in range(1, 5):
                certs.append(complexes.check_exactness(kind, n, r))
    for n in range(1, 4):
        for r in range(1, 5):
            for k in range(n + 1):
                certs.append(complexes.check_direct_sum(n, r, k))
    return certs


def _complex_certificates() -> list[Certificate]:
    certs = []
    for family, rmax in (("P", 4), ("Pminus", 4), ("Qminus", 3), ("S", 3)):
        for n in range(1, 4):
            for r in range(1, rmax + 1):
                certs.append(complexes.check_complex(family, n, r))
    return certs


def _s_property_certificates() -> list[Certificate]:
    certs = []
    for n in range(1, 4):
        for r in range(1, 4):
            certs.append(complexes.check_S_properties(n, r))
    for r in range(1, 4):
        certs.append(complexes.check_S_vector_proxies(r))
    return certs


def _origin_certificates() -> list[Certificate]:
    certs = []
    for family in ("Pminus", "S"):
        for n in range(1, 4):
            for r in range(1, 4):
                for k in range(n + 1):
                    certs.append(complexes.check_origin_independence(family, n, r, k))
    return certs


def _trace_moment_certificates() -> list[Certificate]:
    certs = []
    for n in range(1, 4):
        for r in range(1, 4):
            for k in range(n + 1):
                report = dofs.trace_moment_vanishing_check(r, k, n)
                certs.append(Certificate("trace_moment_vanishing",
                                         {"n": n, "r": r, "k": k},
                                         "pass" if report["pass"] else "fail",
                                         report))
    return certs


COMMUTING_CASES = (
    ("two_triangle_square", "P", 3),
    ("two_triangle_square", "Pminus", 2),
    ("two_boxes_2d", "Qminus", 2),
    ("two_boxes_2d", "S", 3),
)


def commuting_inputs(n: int, k: int, degree: int) -> list[PolyForm]:
    """Every monomial k-form on R^n of coefficient degree <= degree."""
    return spaces.monomial_forms(n, k, degree)


def _commuting_certificates() -> list[Certificate]:
    certs = []
    for mesh_name, family, r in COMMUTING_CASES:
        mesh = mesh_assembly.SAMPLE_MESHES[mesh_name]()
        degrees = complexes.chain_degrees(family, r, mesh.n)
        for k in range(mesh.n):
            deg_k, deg_k1 = degrees[k], degrees[k + 1]
            if deg_k is None or deg_k1 is None or deg_k1 < 1 or deg_k < 1:
                continue
            failures = []
            tested = 0
            for u in commuting_inputs(mesh.n, k, deg_k + 1):
                cert = mesh_assembly.check_commuting(mesh, family, deg_k, u)
                tested += 1
                if not cert.passed:
                    failures.append(cert.params["input"])
            certs.append(Certificate(
                "commuting",
                {"mesh": mesh_name, "family": family, "r": deg_k, "k": k},
                "pass" if not failures else "fail",
                {"inputs_tested": tested, "failures": failures}))
    return certs


ASSEMBLY_CASES = (
    ("two_triangle_square", (("P", 2, 0), ("Pminus", 1, 1), ("Pminus", 2, 1),
                             ("P", 1, 2))),
    ("crisscross_square", (("P", 2, 0), ("Pminus", 1, 1), ("P", 1, 1))),
    ("two_tetrahedra", (("P", 2, 0), ("Pminus", 1, 1), ("Pminus", 1, 2))),
    ("two_boxes_2d", (("Qminus", 2, 0), ("Qminus", 1, 1), ("S", 2, 1))),
    ("grid_boxes_2x2", (("Qminus", 1, 0), ("Qminus", 2, 1), ("S", 2, 0))),
    ("two_cubes_3d", (("Qminus", 1, 1), ("S", 1, 1), ("Qminus", 2, 2))),
)


def _assembly_certificates() -> list[Certificate]:
    certs = []
    for mesh_name, cases in ASSEMBLY_CASES:
        mesh = mesh_assembly.SAMPLE_MESHES[mesh_name]()
        for family, r, k in cases:
            space = mesh_assembly.assemble(mesh, family, r, k)
            face_sum = mesh_assembly.face_sum_dimension(mesh, family, r, k)
            by_rank = mesh_assembly.assembled_dimension_by_rank(space)
            ok = space.dimension == face_sum == by_rank
            certs.append(Certificate(
                "assembly",
                {"mesh": mesh_name, "family": family, "r": r, "k": k},
                "pass" if ok else "fail",
                {"global_dim": space.dimension, "face_sum": face_sum,
                 "constraint_rank_dim": by_rank}))
    return certs


def _parallel(fn, jobs) -> list:
    cap = int(os.environ.get("FEEC_MAX_THREADS", "0") or "0")
    if cap == 0:
        cap = min(8, os.cpu_count() or 1)
    if cap <= 1 or len(jobs) <= 1:
        return [fn(j) for j in jobs]
    with ThreadPoolExecutor(max_workers=cap) as pool:
        return list(pool.map(fn, jobs))


def full_suite() -> list[Certificate]:
    """Every certificate of the shipped verification suite, in fixed order."""
    certs = []
    certs += tables.table1_certificates()
    certs += _dims_certificates()
    certs += _unisolvence_certificates()
    certs += _homotopy_certificates()
    certs += _exactness_certificates()
    certs += _complex_certificates()
    certs += _s_property_certificates()
    certs += _origin_certificates()
    certs += _trace_moment_certificates()
    certs += _commuting_certificates()
    certs += _assembly_certificates()
    return certs
