#!/usr/bin/env python3
"""
adhmlab: exact-arithmetic verification of ADHM data for classical-group instantons.
Every subcommand runs a computation, checks it and prints a canonical JSON report.
"""

import argparse
import copy
import logging
import logging.config
import random
import sys
import time
from collections import Counter
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

# Add the project root to Python path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from config.settings import (CENSUS_CONFIG, HILBERT_CONFIG, LOGGING_CONFIG, NILPOTENT_CONFIG, REPORT_CONFIG,
                             WORKER_CONFIG)
from src.adhm import (AdhmDatum, Flavor, GroupKind, GroupSpec, act, check_equivariance, differential,
                      eigenvalue_divisor, is_costable, is_regular, is_stable, moment_map, stabilizer_dim, stratum_dim)
from src.adhm.sampling import random_group_element, random_invertible, square_zero_so_block, usp1_block
from src.current import ff_census, mark_attained, regular_nilpotent_strata, strata_dims
from src.factorization import (BlockList, blockwise_element, canonical_order, component_census, factorize,
                               gluing_residuals, tensor_commutes_with_factorization, tensor_product)
from src.forms import FormKind, in_group, standard_space
from src.hilbert import (compare_series, complete_intersection_series, differing_degrees, hilbert_truncated,
                         hypersurface_dim, setup_for, usp1_pair_series)
from src.linalg import Field, Mat, inverse, nullspace, rank, same_column_span
from src.nilpotent import (AbDiagram, Partition, ab_table, associated_partitions, build_nilpotent, conjugator,
                           diagram_from_map, normal_form_basis, orbit_dim, realize)
from src.utils.errors import AdhmLabError, FlavorMismatch, OutOfRange, ParseError
from src.utils.report import Check, Report, render_markdown
from src.utils.serialization import (canonicalize, datum_from_json, datum_to_json, digest, field_from_json,
                                     fixture_roundtrip, format_scalar, mat_from_json, parse_scalar, read_document,
                                     space_from_json)

logger = logging.getLogger('adhmlab.cli')

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3

CLAIMS = {
    'verify-fixture': "The fixture datum lies in the zero fibre of the moment map with the recorded invariants.",
    'moment': "The moment map [B1,B2] + ij is computed exactly and is gauge equivariant.",
    'stability': "Stability and costability are decided by invariant-subspace closure.",
    'factorize': "Gluing blocks with disjoint B1-spectra stays in the zero fibre, keeps costability "
                 "and commutes with the blockwise gauge action.",
    'tensor': "The tensor product of two USp(1) data is SO(4) data in the zero fibre, compatible with gluing.",
    'ab-table': "Nilpotent pairs (i, i*) with (ii*)^2 = 0 are classified by ab-diagrams with the tabulated "
                "orbit dimensions.",
    'modality': "sl2[z]/(z^n) acting on L(k^r, T[z]/(z^n)) has modality (2r - 3)n, so its moment map is flat.",
    'hilbert': "Degree-truncated Hilbert series of the invariant ring begin with 1 and match the closed forms.",
    'normal-form': "Self-adjoint endomorphisms with equal associated partitions are conjugate by explicit chains.",
    'census': "An exhaustive F_p census agrees pointwise with the predicted stabilizers.",
}

ANCHORS = {
    'verify-fixture': "[B_1,B_2]+ii^*=0",
    'moment': "(B_1,B_2,i,j) -> [B_1,B_2]+ij",
    'stability': "no nonzero B_1,B_2-invariant subspace contained in Ker(j)",
    'factorize': "B_{m,1}B_2^{(m,l)}-B_2^{(m,l)}B_{l,1}+i_m i_l^*=0",
    'tensor': "i = (i_1 ⊗ Id_{W_2}, Id_{W_1} ⊗ i_2)",
    'ab-table': "1/2(dim Sp(V).ii^* + dim O(W).i^*i + dim V.dim W - Δ_ab)",
    'modality': "mod(g_n : V_n) = (2r-3)n",
    'modality --ordinary': "mod = kN - k",
    'hilbert': "generating function of Hilbert series of the coordinate rings",
    'normal-form': "G(V).B = GL(V).B ∩ p(V)",
    'census': "g^x = {g ∈ g | g.x = 0}",
    'census --components': "{i : ii^* = 0} = Z_+ ∪ Z_-",
}


def configure_logging(verbose: bool = False):
    config = copy.deepcopy(LOGGING_CONFIG)
    if verbose:
        config['handlers']['console']['level'] = 'DEBUG'
    logging.config.dictConfig(config)


def partition_list(text: str) -> Tuple[Partition, ...]:
    """'2 2;1' or '2,2;1': one partition per eigenvalue, separated by ';'."""
    try:
        return tuple(Partition(tuple(int(p) for p in chunk.replace(',', ' ').split()))
                     for chunk in text.split(';'))
    except (ValueError, AdhmLabError) as e:
        raise argparse.ArgumentTypeError(f"Bad partition list '{text}': {e}")


def _count_rows(counts: Dict, key_names: Tuple[str, ...]) -> List[Dict[str, int]]:
    rows = []
    for key, count in sorted(counts.items()):
        key = key if isinstance(key, tuple) else (key,)
        rows.append({**dict(zip(key_names, key)), 'count': count})
    return rows


def _divisor_json(b: Mat) -> Dict[str, int]:
    return {format_scalar(value): mult for value, mult in eigenvalue_divisor(b).points}


class AdhmLabApplication:
    """Runs one subcommand and assembles its Report."""

    def __init__(self, args: argparse.Namespace, parser: argparse.ArgumentParser):
        self.args = args
        self.parser = parser
        self.field = Field.from_tag(args.field)
        self.rng = random.Random(args.seed)
        self.workers = args.workers if args.workers is not None else WORKER_CONFIG['workers']
        self.backend = WORKER_CONFIG['backend']
        self.documents: Dict[str, Any] = {}
        logger.debug(f"Application ready: field {self.field.tag}, seed {args.seed}, {self.workers} worker(s)")

    # Plumbing

    def _inputs(self) -> Dict[str, Any]:
        skip = {'json', 'markdown', 'workers', 'verbose', 'handler'}
        inputs = {}
        for key, value in sorted(vars(self.args).items()):
            if key in skip or value is None:
                continue
            if isinstance(value, Path):
                value = str(value)
            elif isinstance(value, tuple) and value and isinstance(value[0], Partition):
                value = [p.label() for p in value]
            inputs[key] = value
        inputs['documents'] = self.documents
        return inputs

    def _report(self, claim: Optional[str] = None, variant: str = '') -> Report:
        command = self.args.command
        anchor = ANCHORS[f"{command} {variant}" if variant else command]
        return Report(command, claim or CLAIMS[command], digest(self._inputs()), anchor)

    def _document(self, path: Path) -> Dict:
        doc = read_document(path)
        self.documents[str(path)] = canonicalize(doc, str(path))
        return doc

    def _datum_file(self, path: Path) -> AdhmDatum:
        doc = self._document(path)
        if 'datum' in doc:
            return datum_from_json(doc['datum'], f"{path}:$.datum")
        return datum_from_json(doc, f"{path}:$")

    def _datum_input(self) -> Tuple[AdhmDatum, bool]:
        """The --input datum, or the zero datum of --flavor/--k/--N; the flag says which."""
        args = self.args
        if args.input:
            return self._datum_file(Path(args.input)), False
        if args.flavor is None or args.k is None or args.N is None:
            self.parser.error(f"{args.command} needs --input or all of --flavor, --k, --N")
        return AdhmDatum.zero(Flavor.parse(args.flavor), args.k, args.N, self.field), True

    def _random_gauge(self, d: AdhmDatum) -> Mat:
        group = GroupSpec.for_datum(d)
        if d.k == 0:
            return Mat.identity(0, d.field)
        if group.kind is GroupKind.GL:
            return random_invertible(self.rng, d.k, d.field)
        return random_group_element(self.rng, d.v_space)

    def _check_constraints(self, report: Report, d: AdhmDatum):
        problems = d.constraint_violations()
        report.check('flavor_constraints', not problems, '; '.join(problems))

    def _check_differential(self, report: Report, d: AdhmDatum) -> int:
        """At a regular point the differential of μ is onto the gauge Lie algebra."""
        dmu = rank(differential(d))
        group_dim = GroupSpec.for_datum(d).lie_dim
        report.check('differential_full_rank', dmu == group_dim, f"rank {dmu}, dim g(V) {group_dim}")
        return dmu

    # Subcommands

    def verify_fixture(self) -> Report:
        path = Path(self.args.path)
        doc = self._document(path)
        if 'datum' not in doc:
            raise ParseError("Missing key 'datum'", location=f"{path}:$")
        d = datum_from_json(doc['datum'], f"{path}:$.datum")
        report = self._report(doc.get('claim'))
        report.check('canonical_roundtrip', fixture_roundtrip(path))
        self._check_constraints(report, d)
        mu = moment_map(d)
        report.check('moment_map_zero', mu.is_zero())
        report.check('costable', is_costable(d))
        report.check('stable', is_stable(d))
        if is_regular(d):
            self._check_differential(report, d)
        kernel = nullspace(d.j)
        outputs = {
            'moment_map': mu,
            'b1_divisor': _divisor_json(d.b1),
            'kernel_of_j': [v.flatten() for v in kernel],
        }
        expect = doc.get('expect', {})
        if 'kernel_of_j' in expect:
            vectors = [Mat.column([parse_scalar(x, d.field, f"{path}:$.expect.kernel_of_j[{t}][{s}]")
                                   for s, x in enumerate(vec)], d.field)
                       for t, vec in enumerate(expect['kernel_of_j'])]
            if vectors:
                ok = bool(kernel) and same_column_span(Mat.hstack(kernel), Mat.hstack(vectors))
            else:
                ok = not kernel
            report.check('kernel_of_j', ok, f"dim Ker j = {len(kernel)}")
        if 'b1_divisor' in expect:
            expected = {format_scalar(parse_scalar(key, d.field, f"{path}:$.expect.b1_divisor")): mult
                        for key, mult in expect['b1_divisor'].items()}
            report.check('b1_divisor', outputs['b1_divisor'] == expected, str(outputs['b1_divisor']))
        if 'diagram' in expect:
            if not d.flavor.has_forms:
                raise FlavorMismatch("ab-diagrams need so or sp data")
            diagram = diagram_from_map(d.i, d.v_space, d.w_space)
            outputs['diagram'] = diagram.label
            report.check('diagram', diagram == AbDiagram.parse(expect['diagram']), diagram.label)
            if 'pair_orbit_dim' in expect:
                dims = orbit_dim(diagram, NILPOTENT_CONFIG['delta_rule'])
                outputs['pair_orbit_dim'] = dims.dim_pair
                report.check('pair_orbit_dim', dims.dim_pair == expect['pair_orbit_dim'], str(dims.dim_pair))
        report.outputs = outputs
        return report

    def moment(self) -> Report:
        d, generated = self._datum_input()
        report = self._report()
        self._check_constraints(report, d)
        mu = moment_map(d)
        report.check('equivariance', check_equivariance(d, self._random_gauge(d)))
        if generated or self.args.expect_zero:
            report.check('moment_map_zero', mu.is_zero())
        report.outputs = {'flavor': d.flavor.value, 'k': d.k, 'N': d.n, 'moment_map': mu, 'is_zero': mu.is_zero()}
        return report

    def stability(self) -> Report:
        d, _ = self._datum_input()
        report = self._report()
        self._check_constraints(report, d)
        stable, costable = is_stable(d), is_costable(d)
        if d.flavor.has_forms:
            report.check('stable_iff_costable', stable == costable, f"stable {stable}, costable {costable}")
        if self.args.expect_regular:
            report.check('regular', stable and costable)
        report.outputs = {
            'stable': stable,
            'costable': costable,
            'regular': stable and costable,
            'gauge_stabilizer_dim': stabilizer_dim(GroupSpec.for_datum(d), d),
            'b1_divisor': _divisor_json(d.b1),
        }
        return report

    def _random_blocks(self, flavor: Flavor, count: int, n: int, first: int = 1, step: int = 1) -> List[AdhmDatum]:
        """Blocks with B1 = (first + step·t), so spectra are pairwise disjoint."""
        if flavor is Flavor.SO_DATA:
            w_space = standard_space(FormKind.ORTHOGONAL, n, self.field)
            return [square_zero_so_block(self.rng, w_space, first + step * t) for t in range(count)]
        if flavor is Flavor.SP_DATA:
            if n != 2:
                raise OutOfRange(f"Random sp blocks are USp(1) data with N=2, got N={n}")
            return [usp1_block(self.rng, first + step * t, self.field) for t in range(count)]
        raise FlavorMismatch("Random blocks exist for so and sp data only")

    def factorize(self) -> Report:
        args = self.args
        if args.blocks:
            path = Path(args.blocks)
            doc = self._document(path)
            if not isinstance(doc.get('blocks'), list):
                raise ParseError("Expected a list under 'blocks'", location=f"{path}:$")
            fixed = [datum_from_json(b, f"{path}:$.blocks[{t}]") for t, b in enumerate(doc['blocks'])]
            trials = 1
        else:
            if args.flavor is None:
                self.parser.error("factorize needs --blocks or --flavor")
            if args.trials < 1:
                self.parser.error("--trials must be at least 1")
            fixed, trials = None, args.trials
        report = self._report()
        failures: Counter = Counter()
        glued, dmu = None, None
        for _ in range(trials):
            blocks = fixed or self._random_blocks(Flavor.parse(args.flavor), args.count, args.N)
            bl = BlockList.from_blocks(blocks)
            glued = factorize(bl)
            if all(moment_map(b).is_zero() for b in blocks) and not moment_map(glued).is_zero():
                failures['moment_map_zero'] += 1
            if all(is_costable(b) for b in blocks) and not is_costable(glued):
                failures['costability'] += 1
            if not all(r.is_zero() for r in gluing_residuals(bl, glued).values()):
                failures['gluing_residuals'] += 1
            if glued.flavor.has_forms and glued.constraint_violations():
                failures['flavor_constraints'] += 1
            shuffled = list(blocks)
            self.rng.shuffle(shuffled)
            if factorize(canonical_order(BlockList.from_blocks(shuffled))) != factorize(canonical_order(bl)):
                failures['order_independence'] += 1
            gauges = [self._random_gauge(b) for b in blocks]
            moved = factorize(BlockList.from_blocks([act(b, h) for b, h in zip(blocks, gauges)]))
            if act(glued, blockwise_element(gauges)) != moved:
                failures['equivariance'] += 1
            if is_regular(glued):
                dmu = rank(differential(glued))
                if dmu != GroupSpec.for_datum(glued).lie_dim:
                    failures['differential_full_rank'] += 1
        for name in ('moment_map_zero', 'costability', 'gluing_residuals', 'flavor_constraints',
                     'order_independence', 'equivariance', 'differential_full_rank'):
            report.check(name, failures[name] == 0, f"{failures[name]} of {trials} trial(s) failed")
        outputs = {'trials': trials, 'sizes': BlockList.from_blocks(blocks).sizes, 'datum': datum_to_json(glued),
                   'gauge_dim': GroupSpec.for_datum(glued).lie_dim, 'differential_rank': dmu}
        if glued.flavor is Flavor.SO_DATA and glued.k % 2 == 0:
            l = len(eigenvalue_divisor(glued.b1).points)
            if 1 <= l <= glued.k // 2:
                outputs['stratum_dim'] = stratum_dim(glued.k, glued.n, l)
        report.outputs = outputs
        return report

    def tensor(self) -> Report:
        args = self.args
        if args.left or args.right:
            if not (args.left and args.right):
                self.parser.error("tensor needs both --left and --right")
            left, right = self._datum_file(Path(args.left)), self._datum_file(Path(args.right))
            report = self._report()
        else:
            report = self._report()
            left_blocks = self._random_blocks(Flavor.SP_DATA, args.left_charge, 2, first=1)
            right_blocks = self._random_blocks(Flavor.SP_DATA, args.right_charge, 2, first=-1, step=-1)
            if left_blocks or right_blocks:
                report.check('commutes_with_factorization',
                             tensor_commutes_with_factorization(left_blocks, right_blocks))
            unit = AdhmDatum.zero(Flavor.SP_DATA, 0, 2, self.field)
            left = factorize(BlockList.from_blocks(left_blocks)) if left_blocks else unit
            right = factorize(BlockList.from_blocks(right_blocks)) if right_blocks else unit
        out = tensor_product(left, right)
        self._check_constraints(report, out)
        if moment_map(left).is_zero() and moment_map(right).is_zero():
            report.check('moment_map_zero', moment_map(out).is_zero())
        if out.k and is_regular(out):
            self._check_differential(report, out)
        report.outputs = {'k': out.k, 'N': out.n, 'regular': is_regular(out), 'datum': datum_to_json(out)}
        return report

    def ab_table(self) -> Report:
        args = self.args
        rule = args.rule or NILPOTENT_CONFIG['delta_rule']
        report = self._report()
        rows = ab_table(args.k, args.N, args.square_zero, rule)
        round_trip_failures = []
        for row in rows:
            real = realize(row.diagram, self.field)
            if diagram_from_map(real.i, real.v_space, real.w_space) != row.diagram:
                round_trip_failures.append(row.diagram.label)
        report.check('realization_roundtrip', not round_trip_failures, ', '.join(round_trip_failures))
        table = [{
            'diagram': row.diagram.label,
            'delta': row.dims.delta,
            'dim_sp': row.dims.dim_sp,
            'dim_o': row.dims.dim_o,
            'dim_pair': row.dims.dim_pair,
            'zero_fibre_dim': row.zero_fibre_dim,
            'source': row.dims.source,
        } for row in rows]
        outputs: Dict[str, Any] = {'rule': rule, 'count': len(rows), 'table': table}
        if (args.k, args.N) == (4, 5) and args.square_zero:
            golden = self._document(Path(NILPOTENT_CONFIG['golden_table']))
            expected = {row['diagram']: row for row in golden['rows']}
            got = {row['diagram']: row for row in table}
            keys = ('delta', 'dim_sp', 'dim_o', 'dim_pair', 'zero_fibre_dim')
            mismatched = [label for label, row in expected.items()
                          if label not in got or any(got[label][key] != row[key] for key in keys)]
            report.check('golden_rows', not mismatched, ', '.join(mismatched))
            validated = sum(1 for row in rows if row.dims.validated)
            report.check('golden_row_count', validated == len(expected), f"{validated} tabulated diagrams")
            z_locus = golden['z_dim'] + 5
            top = stratum_dim(4, 5, 2)
            report.check('top_component', top == z_locus and all(r['zero_fibre_dim'] < top for r in table),
                         f"dim of the Z locus {z_locus}, stratum dim {top}")
            outputs['z_dim'] = golden['z_dim']
        report.outputs = outputs
        return report

    def modality(self) -> Report:
        args = self.args
        if args.ordinary:
            if args.k is None or args.N is None:
                self.parser.error("modality --ordinary needs --k and --N")
            strata = regular_nilpotent_strata(args.k, args.N)
            report = self._report("The regular nilpotent stratification of k[z]/(z^k)-modules has modality kN - k.",
                                  '--ordinary')
            report.check('modality', strata.modality == args.k * args.N - args.k, str(strata.modality))
            report.outputs = {'modality': strata.modality,
                              'table': [{'orbit_dim': s, 'dim': dim} for s, dim in strata.entries]}
            return report
        if args.r is None or args.n is None:
            self.parser.error("modality needs --r and --n (or --ordinary --k --N)")
        table = strata_dims(args.r, args.n)
        report = self._report()
        expected = (2 * args.r - 3) * args.n
        report.check('modality', table.modality == expected, f"{table.modality}, expected {expected}")
        report.check('flatness', table.satisfies_flatness(),
                     f"dim V - dim G = {table.space_dim - table.group_dim}")
        base = strata_dims(args.r, 1)
        report.check('base_case', [e.dim for e in base.entries] == [2 * args.r, args.r + 1, 0],
                     str([e.dim for e in base.entries]))
        if args.census:
            census = self._census(report, args.r, args.n, args.census)
            table = mark_attained(table, census.by_class, args.census)
        report.outputs = {
            'modality': table.modality,
            'attained_by': [(e.rank_class, e.stabilizer_dim) for e in table.modality_attained_by()],
            'table': [{'rank_class': e.rank_class, 'stabilizer_dim': e.stabilizer_dim, 'dim': e.dim,
                       'attained': e.attained} for e in table.entries],
        }
        return report

    def _census(self, report: Report, r: int, n: int, p: int):
        census = ff_census(r, n, p, self.workers, CENSUS_CONFIG['max_points'], self.backend)
        report.check('pointwise_claims', census.violations == 0, f"{census.violations} violation(s)")
        report.check('point_total', census.total == p ** (2 * r * n), str(census.total))
        full_rank = (p ** r - 1) * (p ** r - p) * p ** (2 * r * (n - 1))
        rank_two = sum(c for (l, _), c in census.by_class.items() if l == 2)
        report.check('full_rank_count', rank_two == full_rank, f"{rank_two}, expected {full_rank}")
        return census

    def census(self) -> Report:
        args = self.args
        if args.components:
            report = self._report("The isotropic maps {i : ii* = 0} (k=2, N=4) split into two components of "
                                  "equal size, swapped by a reflection of W.", '--components')
            result = component_census(args.p)
            report.check('origin', result.by_rank.get(0) == 1, str(result.by_rank.get(0)))
            report.check('balanced_components', result.balanced, str(result.by_component))
            report.check('reflection_swaps', result.swap_failures == 0, f"{result.swap_failures} failure(s)")
            report.outputs = {'by_rank': {str(r): c for r, c in result.by_rank.items()},
                              'by_component': {str(c): n for c, n in result.by_component.items()},
                              'table': _count_rows(result.by_rank, ('rank',))}
            return report
        if args.r is None or args.n is None:
            self.parser.error("census needs --r and --n (or --components)")
        report = self._report()
        census = self._census(report, args.r, args.n, args.p)
        report.outputs = {
            'total': census.total,
            'by_stabilizer': {str(s): c for s, c in census.by_stabilizer.items()},
            'table': _count_rows(census.by_class, ('rank_class', 'stabilizer_dim')),
        }
        return report

    def hilbert(self) -> Report:
        args = self.args
        flavor = Flavor.parse(args.flavor)
        if args.compare_usp1 and (args.ring or flavor is not Flavor.SO_DATA or args.N != 4 or args.k % 2):
            self.parser.error("--compare-usp1 compares invariant series of SO(4) data with even k")
        setup = setup_for(flavor, args.k, args.N, self.field)
        limit = HILBERT_CONFIG['work_limit']
        series = hilbert_truncated(setup, args.dmax, args.ring, self.workers, self.backend, limit)
        report = self._report()
        report.check('constant_term', series.constant_term == 1, str(series.coeffs[:1]))
        outputs: Dict[str, Any] = {'coeffs': series.coeffs, 'ring': args.ring, 'variables': setup.ambient_dim,
                                   'relations': len(setup.relations)}
        if args.ring:
            closed = complete_intersection_series(setup.ambient_dim, len(setup.relations), args.dmax)
            outputs['complete_intersection'] = closed
            if flavor is Flavor.ORDINARY and args.k == 1:
                expected = [hypersurface_dim(setup.ambient_dim, d) for d in range(args.dmax + 1)]
                report.check('hypersurface', series.coeffs == expected, str(expected))
            elif flavor is Flavor.SO_DATA and (args.k, args.N) == (2, 4):
                report.check('complete_intersection', series.coeffs == closed, str(closed))
        if args.compare_usp1:
            model = usp1_pair_series(args.k // 2, args.dmax, self.workers, self.backend, limit)
            first = compare_series(series.coeffs, model)
            outputs['usp1_pair'] = model
            outputs['first_difference'] = first
            outputs['differing_degrees'] = differing_degrees(series.coeffs, model)
            report.check('usp1_models_differ', first is not None, f"first difference at degree {first}")
        report.outputs = outputs
        return report

    def normal_form(self) -> Report:
        args = self.args
        if args.input:
            path = Path(args.input)
            doc = self._document(path)
            field = field_from_json(doc, f"{path}:$")
            if 'matrix' not in doc or 'space' not in doc:
                raise ParseError("Expected 'matrix' and 'space'", location=f"{path}:$")
            b = mat_from_json(doc['matrix'], field, f"{path}:$.matrix")
            space = space_from_json(doc['space'], field, f"{path}:$.space")
            parts = None
        elif args.partitions:
            parts = args.partitions
            b, space = build_nilpotent(parts, args.kind, self.field)
        else:
            self.parser.error("normal-form needs --input or --partitions")
        report = self._report()
        found = associated_partitions(b)
        outputs: Dict[str, Any] = {
            'kind': space.kind.value,
            'partitions': [{'eigenvalue': value, 'partition': p.label()} for value, p in found],
        }
        if parts is not None:
            report.check('build_roundtrip', [p for _, p in found] == list(parts),
                         '; '.join(p.label() for _, p in found))
        if len(found) == 1 and not found[0][0]:
            basis = normal_form_basis(b, space)
            report.check('pairing_table', basis.pairing_table() == basis.expected_gram())
            outputs['chains'] = [{'length': c.length, 'paired': c.partner is not None, 'constant': c.constant}
                                 for c in basis.chains]
            outputs['basis'] = basis.matrix
        g = random_group_element(self.rng, space) if space.dim else Mat.identity(0, space.field)
        target = g @ b @ inverse(g)
        h = conjugator(b, target, space)
        report.check('conjugator', in_group(h, space) and h @ b == target @ h)
        report.outputs = outputs
        return report

    def dispatch(self) -> Report:
        handlers: Dict[str, Callable[[], Report]] = {
            'verify-fixture': self.verify_fixture,
            'moment': self.moment,
            'stability': self.stability,
            'factorize': self.factorize,
            'tensor': self.tensor,
            'ab-table': self.ab_table,
            'modality': self.modality,
            'hilbert': self.hilbert,
            'normal-form': self.normal_form,
            'census': self.census,
        }
        start = time.perf_counter()
        report = handlers[self.args.command]()
        report.timing_ms = (time.perf_counter() - start) * 1000
        logger.info(f"{report.command}: {sum(c.passed for c in report.checks)}/{len(report.checks)} checks passed")
        return report

    def failure_report(self, error: Exception) -> Report:
        report = self._report()
        report.checks.append(Check('completed', False, f"{type(error).__name__}: {error}"))
        return report

    def emit(self, report: Report):
        include_timing = REPORT_CONFIG['include_timing']
        if self.args.markdown:
            render_markdown(report, include_timing=include_timing)
        else:
            sys.stdout.buffer.write(report.dumps(include_timing))
            sys.stdout.flush()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='adhmlab',
        description="Exact computations with ADHM data of classical-group instantons"
    )
    parser.add_argument('--seed', type=int, default=REPORT_CONFIG['default_seed'],
                        help='Seed for every random choice (default from ADHMLAB_SEED)')
    parser.add_argument('--field', default='q', help="Coefficient field: 'q' or 'fp:<p>'")
    parser.add_argument('--workers', type=int, default=None,
                        help='Parallel workers for census and Hilbert runs (default from ADHMLAB_WORKERS)')
    output = parser.add_mutually_exclusive_group()
    output.add_argument('--json', action='store_true', help='Print the report as canonical JSON (default)')
    output.add_argument('--markdown', action='store_true', help='Print the report as markdown tables')
    parser.add_argument('--verbose', action='store_true', help='Log debug output to stderr')

    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('verify-fixture', help='Check a datum fixture and its recorded invariants')
    p.add_argument('path', type=Path)

    for name, text in (('moment', 'Compute the moment map'), ('stability', 'Decide stability and costability')):
        p = sub.add_parser(name, help=text)
        p.add_argument('--input', type=Path, help='Datum JSON file')
        p.add_argument('--flavor', choices=['ordinary', 'so', 'sp'], help='Zero datum flavor')
        p.add_argument('--k', type=int)
        p.add_argument('--N', type=int)
        if name == 'moment':
            p.add_argument('--expect-zero', action='store_true', help='Require μ = 0')
        else:
            p.add_argument('--expect-regular', action='store_true', help='Require a stable and costable datum')

    p = sub.add_parser('factorize', help='Glue blocks with disjoint B1-spectra')
    p.add_argument('--blocks', type=Path, help="JSON file with a list of data under 'blocks'")
    p.add_argument('--flavor', choices=['so', 'sp'], help='Flavor of random blocks')
    p.add_argument('--N', type=int, default=4)
    p.add_argument('--count', type=int, default=2, help='Blocks per trial')
    p.add_argument('--trials', type=int, default=1)

    p = sub.add_parser('tensor', help='Tensor two USp(1) data into SO(4) data')
    p.add_argument('--left', type=Path)
    p.add_argument('--right', type=Path)
    p.add_argument('--left-charge', type=int, default=1)
    p.add_argument('--right-charge', type=int, default=1)

    p = sub.add_parser('ab-table', help='Tabulate ab-diagrams with orbit dimensions')
    p.add_argument('--k', type=int, default=4)
    p.add_argument('--N', type=int, default=5)
    p.add_argument('--square-zero', action='store_true', help='Only pairs with (ii*)^2 = 0')
    p.add_argument('--rule', choices=['golden', 'measured'], help='How Δ is obtained')

    p = sub.add_parser('modality', help='Strata and modality of the truncated current algebra')
    p.add_argument('--r', type=int)
    p.add_argument('--n', type=int)
    p.add_argument('--census', type=int, metavar='P', help='Cross-check with an F_P census')
    p.add_argument('--ordinary', action='store_true', help='Regular nilpotent strata instead')
    p.add_argument('--k', type=int)
    p.add_argument('--N', type=int)

    p = sub.add_parser('hilbert', help='Degree-truncated Hilbert series')
    p.add_argument('--flavor', choices=['ordinary', 'so', 'sp'], required=True)
    p.add_argument('--k', type=int, required=True)
    p.add_argument('--N', type=int, required=True)
    p.add_argument('--dmax', type=int, default=4)
    p.add_argument('--ring', action='store_true', help='Quotient ring dimensions instead of invariants')
    p.add_argument('--compare-usp1', action='store_true', help='Compare with the USp(1) x USp(1) model')

    p = sub.add_parser('normal-form', help='Associated partitions, normal form and conjugator')
    p.add_argument('--input', type=Path, help="JSON file with 'matrix' and 'space'")
    p.add_argument('--partitions', type=partition_list, help="Partitions per eigenvalue, e.g. '2 2;1'")
    p.add_argument('--kind', choices=['orthogonal', 'symplectic'], default='orthogonal')

    p = sub.add_parser('census', help='Exhaustive census over F_p')
    p.add_argument('--r', type=int)
    p.add_argument('--n', type=int)
    p.add_argument('--p', type=int, default=3)
    p.add_argument('--components', action='store_true', help='Components of {i : ii* = 0}, k=2, N=4')

    return parser


def run(argv: Optional[List[str]] = None) -> Tuple[Optional[Report], int]:
    """Parse, execute and print; returns the report (None when nothing ran) and the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return None, EXIT_OK if not e.code else EXIT_USAGE
    configure_logging(args.verbose)

    app = None
    try:
        app = AdhmLabApplication(args, parser)
        report = app.dispatch()
    except SystemExit as e:
        return None, EXIT_OK if not e.code else EXIT_USAGE
    except AdhmLabError as e:
        logger.error(f"Error running {args.command}: {str(e)}")
        if app is None:
            return None, EXIT_FAILED
        report = app.failure_report(e)
        app.emit(report)
        return report, EXIT_FAILED
    except KeyboardInterrupt:
        logger.info("Operation interrupted by user")
        return None, EXIT_INTERNAL
    except Exception as e:
        logger.exception(f"Unexpected error in {args.command}: {str(e)}")
        return None, EXIT_INTERNAL
    app.emit(report)
    return report, EXIT_OK if report.passed else EXIT_FAILED


def main():
    """Main entry point."""
    _, code = run()
    sys.exit(code)


if __name__ == "__main__":
    main()
