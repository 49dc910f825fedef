//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. All comparisons are exact.

use std::collections::HashSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use kuratowski_core::counts::{dedekind_count, Column, Row};
use kuratowski_core::enumerate::{enumerate_spaces, spaces_up_to};
use kuratowski_core::lattice::{distributive_closure, hereditary_subsets, meet_semilattice_terms};
use kuratowski_core::pointset::PointSet;
use kuratowski_core::poset::{build_order, unary_terms, OperationPoset};
use kuratowski_core::saturation::{ej_sequence, growth_probe, phi_iterate, saturate, OpSet};
use kuratowski_core::tables::{table1, table2, Defaults, Evidence, TableReport};
use kuratowski_core::term::Term;
use kuratowski_core::topology::{
    prefix_space, validate_space, TopSpace, ValidationConfig, Violation,
};
use kuratowski_core::unary::{enumerate_unary_monoid, normalize_unary, Letter, UnaryWord};

/// Every count and set comparison must match exactly.
const TOLERANCE: u128 = 0;
/// Wall-clock budget for the first table.
const TABLE1_BUDGET: Duration = Duration::from_secs(600);
const SOUNDNESS_POINTS: usize = 4;
const SOUNDNESS_WORD_LEN: usize = 6;
const DUALITY_TRIALS: usize = 1000;
const DUALITY_MAX_SIZE: usize = 7;
const DUALITY_SEED: u64 = 0x6b75_7261;
const DEMO_MAX_N: usize = 40;
const GROWTH_SIZES: [usize; 3] = [6, 10, 14];
const GROWTH_CAP: usize = 1 << 16;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn t(s: &str) -> Term {
    s.parse().unwrap_or_else(|e| panic!("bad term {s}: {e}"))
}

fn ops(s: &str) -> OpSet {
    s.parse().expect("opset")
}

const INF: Option<u128> = None;

/// Returns the number of witness cells and growth cells.
#[allow(clippy::absurd_extreme_comparisons)]
fn check_grid(
    report: &TableReport,
    expect: &[[Option<u128>; 4]; 6],
) -> Result<(usize, usize), String> {
    let (mut witnesses, mut growth) = (0, 0);
    for (r, row) in Row::ALL.iter().enumerate() {
        for (c, col) in Column::ALL.iter().enumerate() {
            let cell = report.cell(*row, *col);
            let label = format!("{} x {}", row.label(), col.label());
            match (expect[r][c], &cell.evidence) {
                (Some(v), Evidence::Witness(w)) => {
                    ensure((w.count as u128).abs_diff(v) <= TOLERANCE, || {
                        format!("{label}: witness gives {}, expected {v}", w.count)
                    })?;
                    let again = saturate(&w.space, &w.assignment, cell.ops, 1 << 16)
                        .map_err(|e| e.to_string())?
                        .len();
                    ensure(again == w.count, || {
                        format!("{label}: witness does not re-saturate")
                    })?;
                    witnesses += 1;
                }
                (None, Evidence::Growth(g)) => {
                    ensure(g.is_evidence(), || {
                        format!("{label}: no strict growth ({g})")
                    })?;
                    growth += 1;
                }
                (e, _) => return Err(format!("{label}: expected {e:?}, got {:?}", cell.expected)),
            }
        }
    }
    Ok((witnesses, growth))
}

fn criterion_1() -> Outcome {
    let expect = [
        [Some(1), Some(1), Some(1), Some(1)],
        [Some(2), Some(2), Some(2), Some(2)],
        [Some(2), Some(2), Some(2), Some(2)],
        [Some(2), Some(4), Some(4), Some(4)],
        [Some(7), Some(13), Some(13), Some(35)],
        [Some(14), INF, INF, INF],
    ];
    let start = Instant::now();
    let report = table1(Defaults::builtin()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let (w, g) = check_grid(&report, &expect)?;
    ensure(report.all_ok(), || "table reports a mismatch".into())?;
    ensure(elapsed <= TABLE1_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!(
        "24 cells exact, {w} witnesses, {g} growth cells, {:.1}s",
        elapsed.as_secs_f64()
    ))
}

/// Monotone Boolean functions by truth-table brute force.
fn monotone_brute(n: usize) -> u128 {
    let inputs = 1usize << n;
    (0u64..1 << inputs)
        .filter(|&f| {
            (0..inputs).all(|x| (0..n).all(|v| f >> x & 1 == 0 || f >> (x | 1 << v) & 1 == 1))
        })
        .count() as u128
}

/// Antichains of the subset lattice of an `n`-set.
fn antichains(n: usize) -> u128 {
    fn go(cands: &[usize], chosen: &mut Vec<usize>) -> u128 {
        let Some((&x, rest)) = cands.split_first() else {
            return 1;
        };
        let mut total = go(rest, chosen);
        if chosen.iter().all(|&y| x & y != x && x & y != y) {
            chosen.push(x);
            total += go(rest, chosen);
            chosen.pop();
        }
        total
    }
    go(&(0..1 << n).collect::<Vec<_>>(), &mut Vec::new())
}

fn formula_grid(n: u32, d: u128) -> [[Option<u128>; 4]; 6] {
    let n128 = n as u128;
    let p2 = 2u128.pow(n) - 1;
    let p3 = 3u128.pow(n) - 1;
    let b = 1u128 << (1u32 << n);
    [
        [Some(n128), Some(p2), Some(p2), Some(d)],
        [Some(2 * n128), Some(p3), INF, INF],
        [Some(2 * n128), INF, Some(p3), INF],
        [Some(2 * n128), Some(b), Some(b), Some(b)],
        [Some(7 * n128), INF, INF, INF],
        [Some(14 * n128), INF, INF, INF],
    ]
}

fn criterion_2() -> Outcome {
    let mut dn = Vec::new();
    for n in 1..=4 {
        let d = dedekind_count(n).map_err(|e| e.to_string())?;
        ensure(d + 2 == monotone_brute(n), || {
            format!("D_{n} = {d} disagrees with brute force")
        })?;
        dn.push(d);
    }
    ensure(dn == [1, 4, 18, 166], || format!("D_1..4 = {dn:?}"))?;
    ensure(antichains(4) == 168, || "antichain oracle for n = 4".into())?;

    let two = table2(2, Defaults::builtin()).map_err(|e| e.to_string())?;
    let (w2, g2) = check_grid(&two, &formula_grid(2, 4))?;

    // at one generator each finite formula gives the first table's value;
    // the formula's infinite cells are finite there
    let one = table2(1, Defaults::builtin()).map_err(|e| e.to_string())?;
    let f1 = formula_grid(1, 1);
    let t1 = [
        [Some(1), Some(1), Some(1), Some(1)],
        [Some(2), Some(2), Some(2), Some(2)],
        [Some(2), Some(2), Some(2), Some(2)],
        [Some(2), Some(4), Some(4), Some(4)],
        [Some(7), Some(13), Some(13), Some(35)],
        [Some(14), INF, INF, INF],
    ];
    let mut formula_cells = 0;
    for r in 0..6 {
        for c in 0..4 {
            if let Some(v) = f1[r][c] {
                formula_cells += 1;
                ensure(t1[r][c] == Some(v), || {
                    format!("n = 1 formula cell ({r},{c}) = {v}")
                })?;
            }
        }
    }
    check_grid(&one, &t1)?;
    ensure(one.all_ok() && two.all_ok(), || {
        "table reports a mismatch".into()
    })?;
    Ok(format!(
        "n=2: {w2} brute-force witnesses, {g2} growth cells; n=1: {formula_cells} formula cells exact; D_1..4 = 1, 4, 18, 166"
    ))
}

fn all_words(max_len: usize) -> Vec<UnaryWord> {
    let mut out = vec![UnaryWord::identity()];
    let mut layer = vec![UnaryWord::identity()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w| [Letter::K, Letter::I, Letter::C].map(|l| w.then_apply_first(l)))
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

fn criterion_3() -> Outcome {
    let as_set = |v: Vec<UnaryWord>| v.into_iter().map(|w| w.to_string()).collect::<HashSet<_>>();
    let words = |ws: &[&str]| ws.iter().map(|s| s.to_string()).collect::<HashSet<_>>();
    let ki = as_set(enumerate_unary_monoid(&[Letter::K, Letter::I]).map_err(|e| e.to_string())?);
    ensure(
        ki == words(&["I", "i", "ik", "iki", "k", "ki", "kik"]),
        || format!("{{k,i}}: {ki:?}"),
    )?;
    let kc = as_set(enumerate_unary_monoid(&[Letter::K, Letter::C]).map_err(|e| e.to_string())?);
    let fourteen = words(&[
        "I", "i", "ik", "iki", "k", "ki", "kik", "c", "ci", "cik", "ciki", "ck", "cki", "ckik",
    ]);
    ensure(kc == fourteen, || format!("{{k,c}}: {kc:?}"))?;

    let ws = all_words(SOUNDNESS_WORD_LEN);
    let spaces = spaces_up_to(SOUNDNESS_POINTS).map_err(|e| e.to_string())?;
    let mut checks = 0u64;
    let mut violations = 0u64;
    for w in &ws {
        let nf = normalize_unary(w);
        for sp in &spaces {
            let n = sp.point_count();
            for b in 0..1u64 << n {
                let a = PointSet::from_bits(n, b);
                checks += 1;
                if w.apply(sp, a).unwrap() != nf.apply(sp, a).unwrap() {
                    violations += 1;
                }
            }
        }
    }
    ensure(violations == 0, || {
        format!("{violations} unsound normalizations")
    })?;
    Ok(format!(
        "7 and 14 normal forms; {} words x {checks} evaluations sound",
        ws.len()
    ))
}

fn edges_by_name(p: &OperationPoset) -> HashSet<(String, String)> {
    p.hasse()
        .iter()
        .map(|&(a, b)| (p.elements()[a].to_string(), p.elements()[b].to_string()))
        .collect()
}

fn named_edges(pairs: &[(&str, &str)]) -> HashSet<(String, String)> {
    pairs
        .iter()
        .map(|(a, b)| (t(a).to_string(), t(b).to_string()))
        .collect()
}

fn criterion_4() -> Outcome {
    let m = Defaults::builtin().order_bound;
    let fig1 = build_order(&unary_terms(), m).map_err(|e| e.to_string())?;
    let want1 = named_edges(&[
        ("i g1", "iki g1"),
        ("iki g1", "ki g1"),
        ("iki g1", "ik g1"),
        ("ki g1", "kik g1"),
        ("ik g1", "kik g1"),
        ("kik g1", "k g1"),
        ("i g1", "g1"),
        ("g1", "k g1"),
    ]);
    ensure(edges_by_name(&fig1) == want1, || {
        format!("seven-term order: {:?}", edges_by_name(&fig1))
    })?;

    let meets = meet_semilattice_terms(&fig1).map_err(|e| e.to_string())?;
    let listed = [
        "g1",
        "i g1",
        "ik g1",
        "iki g1",
        "k g1",
        "ki g1",
        "kik g1",
        "ki g1 ^ ik g1",
        "g1 ^ kik g1",
        "g1 ^ ki g1",
        "g1 ^ ik g1",
        "g1 ^ ki g1 ^ ik g1",
        "g1 ^ iki g1",
    ];
    let got: HashSet<String> = meets.iter().map(|x| x.to_string()).collect();
    let want: HashSet<String> = listed.iter().map(|s| t(s).to_string()).collect();
    ensure(got == want, || format!("meet terms {got:?}"))?;
    let fig2 = build_order(&meets, m).map_err(|e| e.to_string())?;
    let want2 = named_edges(&[
        ("g1", "k g1"),
        ("kik g1", "k g1"),
        ("g1 ^ kik g1", "g1"),
        ("g1 ^ kik g1", "kik g1"),
        ("ki g1", "kik g1"),
        ("ik g1", "kik g1"),
        ("g1 ^ ki g1", "g1 ^ kik g1"),
        ("g1 ^ ik g1", "g1 ^ kik g1"),
        ("ki g1 ^ ik g1", "ki g1"),
        ("g1 ^ ki g1", "ki g1"),
        ("g1 ^ ik g1", "ik g1"),
        ("ki g1 ^ ik g1", "ik g1"),
        ("g1 ^ ki g1 ^ ik g1", "g1 ^ ki g1"),
        ("g1 ^ ki g1 ^ ik g1", "g1 ^ ik g1"),
        ("g1 ^ ki g1 ^ ik g1", "ki g1 ^ ik g1"),
        ("iki g1", "ki g1 ^ ik g1"),
        ("g1 ^ iki g1", "g1 ^ ki g1 ^ ik g1"),
        ("g1 ^ iki g1", "iki g1"),
        ("i g1", "g1 ^ iki g1"),
    ]);
    ensure(edges_by_name(&fig2) == want2, || {
        format!("thirteen-term order: {:?}", edges_by_name(&fig2))
    })?;

    let h = hereditary_subsets(&fig1).map_err(|e| e.to_string())?;
    ensure(h.nonempty_count() == 13, || {
        format!("{} nonempty down-sets", h.nonempty_count())
    })?;

    let lat = distributive_closure(&meets, m).map_err(|e| e.to_string())?;
    ensure(lat.len() == 35, || {
        format!("{} lattice elements", lat.len())
    })?;
    ensure(lat.warnings().is_empty(), || {
        format!("{:?}", lat.warnings())
    })?;
    let joins = [
        "(g1 ^ kik g1) v ki g1 v ik g1",
        "(g1 ^ kik g1) v ki g1",
        "(g1 ^ kik g1) v ik g1",
        "(g1 ^ kik g1) v (ki g1 ^ ik g1)",
        "(g1 ^ kik g1) v iki g1",
        "(g1 ^ ki g1) v (g1 ^ ik g1) v (ki g1 ^ ik g1)",
        "(g1 ^ ki g1) v (g1 ^ ik g1) v iki g1",
        "(g1 ^ ki g1) v ik g1",
        "(g1 ^ ki g1) v (ki g1 ^ ik g1)",
        "(g1 ^ ki g1) v iki g1",
        "(g1 ^ ik g1) v ki g1",
        "(g1 ^ ik g1) v (ki g1 ^ ik g1)",
        "(g1 ^ ik g1) v iki g1",
        "(g1 ^ ki g1 ^ ik g1) v iki g1",
    ];
    let mut hit = HashSet::new();
    for j in joins {
        let idx = lat
            .find(&t(j))
            .map_err(|e| e.to_string())?
            .ok_or(format!("{j} missing"))?;
        ensure(idx >= 13, || format!("{j} coincides with a meet"))?;
        hit.insert(idx);
    }
    ensure(hit.len() == 14, || "listed joins are not distinct".into())?;
    Ok(format!(
        "8 and 19 covers exact at {m} points; 13 down-sets; 35 elements incl. all 14 joins"
    ))
}

fn criterion_5() -> Outcome {
    let identities = [
        ("k(g1 ^ ik g1)", "kik g1"),
        ("k(g1 ^ kik g1)", "kik g1"),
        ("k(ki g1 ^ ik g1)", "ki g1"),
        ("k(g1 ^ iki g1)", "ki g1"),
        ("k(g1 ^ ki g1 ^ ik g1)", "ki g1"),
        ("k(g1 ^ ki g1)", "ki g1"),
    ];
    let spaces = spaces_up_to(4).map_err(|e| e.to_string())?;
    let mut violations = 0u64;
    let mut checks = 0u64;
    for (l, r) in identities {
        let (l, r) = (t(l), t(r));
        for sp in &spaces {
            let n = sp.point_count();
            for b in 0..1u64 << n {
                let a = [PointSet::from_bits(n, b)];
                checks += 1;
                violations += (l.eval(sp, &a).unwrap() != r.eval(sp, &a).unwrap()) as u64;
            }
        }
    }
    let (lhs, rhs) = (t("k(g1 ^ g2)"), t("k g1 ^ k g2"));
    for sp in &spaces {
        let n = sp.point_count();
        for a in 0..1u64 << n {
            for b in 0..1u64 << n {
                let s = [PointSet::from_bits(n, a), PointSet::from_bits(n, b)];
                checks += 1;
                violations += !lhs
                    .eval(sp, &s)
                    .unwrap()
                    .is_subset(rhs.eval(sp, &s).unwrap()) as u64;
            }
        }
    }
    ensure(violations == 0, || format!("{violations} violations"))?;
    Ok(format!(
        "6 identities and the meet inequality, {checks} checks, 0 violations"
    ))
}

fn closed_form(n: usize, j: usize) -> PointSet {
    PointSet::from_labels(n, (2 * j + 2..=n).filter(|l| l % 2 == 0)).unwrap()
}

fn criterion_6() -> Outcome {
    let mut checks = 0;
    for n in 4..=DEMO_MAX_N {
        let steps = (n - 2) / 2;
        let phi = phi_iterate(n, steps).map_err(|e| e.to_string())?;
        let ej = ej_sequence(n, steps).map_err(|e| e.to_string())?;
        for j in 1..=steps {
            let want = closed_form(n, j);
            ensure(phi[j - 1] == want, || {
                format!("phi N={n} j={j}: {}", phi[j - 1])
            })?;
            ensure(ej[j - 1] == want, || {
                format!("ej N={n} j={j}: {}", ej[j - 1])
            })?;
            checks += 2;
        }
        let distinct: HashSet<_> = ej.iter().collect();
        ensure(distinct.len() == ej.len(), || format!("ej N={n} repeats"))?;
    }
    let g1 = growth_probe(ops("kc^"), 1, &GROWTH_SIZES, GROWTH_CAP).map_err(|e| e.to_string())?;
    let g2 = growth_probe(ops("k^"), 2, &GROWTH_SIZES, GROWTH_CAP).map_err(|e| e.to_string())?;
    for g in [&g1, &g2] {
        ensure(g.is_evidence(), || format!("{g}"))?;
        ensure(g.rows.iter().all(|r| !r.truncated), || {
            format!("truncated: {g}")
        })?;
    }
    let counts = |g: &kuratowski_core::saturation::GrowthReport| {
        g.rows
            .iter()
            .map(|r| r.count.to_string())
            .collect::<Vec<_>>()
            .join("<")
    };
    Ok(format!(
        "{checks} iterates exact for N<={DEMO_MAX_N}; growth {} and {} (evidence, not proof)",
        counts(&g1),
        counts(&g2)
    ))
}

fn random_term(rng: &mut ChaCha8Rng, budget: usize, gens: usize) -> Term {
    if budget <= 1 {
        return Term::gen(rng.gen_range(1..=gens));
    }
    match rng.gen_range(0..6) {
        0 => Term::gen(rng.gen_range(1..=gens)),
        1 => random_term(rng, budget - 1, gens).k(),
        2 => random_term(rng, budget - 1, gens).i(),
        3 => random_term(rng, budget - 1, gens).c(),
        op => {
            if budget < 3 {
                return random_term(rng, budget - 1, gens).k();
            }
            let left = rng.gen_range(1..=budget - 2);
            let a = random_term(rng, left, gens);
            let b = random_term(rng, budget - 1 - a.size(), gens);
            if op == 4 {
                a.meet(b)
            } else {
                a.join(b)
            }
        }
    }
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(DUALITY_SEED);
    let spaces = spaces_up_to(4).map_err(|e| e.to_string())?;
    let mut violations = 0;
    for _ in 0..DUALITY_TRIALS {
        let gens = rng.gen_range(1..=2);
        let budget = rng.gen_range(1..=DUALITY_MAX_SIZE);
        let term = random_term(&mut rng, budget, gens);
        ensure(term.size() <= DUALITY_MAX_SIZE, || {
            format!("oversized {term}")
        })?;
        let sp: &TopSpace = spaces[rng.gen_range(0..spaces.len())];
        let n = sp.point_count();
        let a: Vec<PointSet> = (0..gens)
            .map(|_| PointSet::from_bits(n, rng.gen()))
            .collect();
        let ca: Vec<PointSet> = a.iter().map(|s| s.complement()).collect();
        let lhs = term.dual().eval(sp, &a).unwrap();
        let rhs = term.eval(sp, &ca).unwrap().complement();
        violations += (lhs != rhs) as usize;
    }
    ensure(violations == 0, || {
        format!("{violations} duality violations")
    })?;

    let mut pairs = 0;
    let mut literal_mismatch = 0;
    for sp in &spaces {
        let n = sp.point_count();
        let (mut max_meet, mut max_join) = (0, 0);
        for b in 0..1u64 << n {
            let a = PointSet::from_bits(n, b);
            let meet = saturate(sp, &[a], ops("ki^"), 1000).unwrap().len();
            let join_c = saturate(sp, &[a.complement()], ops("kiv"), 1000)
                .unwrap()
                .len();
            let join = saturate(sp, &[a], ops("kiv"), 1000).unwrap().len();
            ensure(meet == join_c, || format!("{sp:?} {a}: {meet} vs {join_c}"))?;
            literal_mismatch += (meet != join) as usize;
            max_meet = max_meet.max(meet);
            max_join = max_join.max(join);
            pairs += 1;
        }
        ensure(max_meet == max_join, || {
            format!("{sp:?}: maxima {max_meet} vs {max_join}")
        })?;
    }
    Ok(format!(
        "{DUALITY_TRIALS} random triples, 0 violations; family sizes of A and cA agree on {pairs} pairs (same-set sizes differ on {literal_mismatch})"
    ))
}

fn criterion_8() -> Outcome {
    let config = ValidationConfig::default();
    let mut spaces = 0;
    for n in 1..=4 {
        for sp in enumerate_spaces(n, false).map_err(|e| e.to_string())? {
            let r = validate_space(&sp, &config);
            ensure(r.is_valid(), || format!("{sp:?}: {r}"))?;
            spaces += 1;
        }
    }
    for n in 1..=DEMO_MAX_N {
        let r = validate_space(&prefix_space(n).unwrap(), &config);
        ensure(r.is_valid(), || format!("prefix space {n}: {r}"))?;
    }
    let bad = TopSpace::from_matrix_unchecked(&[
        vec![true, true, false],
        vec![false, true, true],
        vec![false, false, true],
    ])
    .unwrap();
    let r = validate_space(&bad, &config);
    ensure(
        r.violations
            .iter()
            .any(|v| matches!(v, Violation::Transitivity { .. })),
        || format!("counterexample accepted: {r}"),
    )?;
    Ok(format!(
        "{spaces} labeled spaces and {DEMO_MAX_N} prefix spaces valid; counterexample rejected"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("table 1 reproduction", criterion_1),
        ("table 2 reproduction (n = 1, 2)", criterion_2),
        ("monoid normal forms", criterion_3),
        ("order diagrams", criterion_4),
        ("identity suite", criterion_5),
        ("infinite-family evidence", criterion_6),
        ("duality suite", criterion_7),
        ("axiom property suite", criterion_8),
    ];
    let mut failed = 0;
    for (n, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(f).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail} [{secs:.1}s]", n + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why} [{secs:.1}s]", n + 1);
            }
        }
    }
    println!("acceptance: {} of 8 criteria passed", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
