//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use orbicoh_cli::problem::{Problem, Quotient};
use orbicoh_cli::{run, Command, Twist};
use orbicoh_core::exact::{rat, CycMatrix, Cyclotomic, Phase, Rational};
use orbicoh_core::group::abelian_coords;
use orbicoh_core::torsion::{
    abelian_cocycle, abelian_h2, alpha_regular_classes, coboundary, phase, twisted_center,
    twisted_character,
};
use orbicoh_core::{
    close_matrix_group, duality_check, from_cocycle, orbifold_hodge, verify, Character, Cocycle,
    FiniteGroup, GlobalQuotient, SpaceKind,
};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use serde_json::Value;

type Check = Result<(), String>;

const PROPERTY_CASES: u32 = 200;

fn fixture(name: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn problem(name: &str) -> Problem {
    Problem::parse(&fixture(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn payload(command: Command, name: &str, twist: Twist) -> Result<Value, String> {
    run(command, &fixture(name), &twist)
        .map(|n| n.to_json())
        .map_err(|e| format!("{name} {}: {e}", command.name()))
}

/// Betti numbers in degrees `0..=top` from a `betti` payload; fails on any
/// nonzero entry outside that range or at a fractional degree.
fn betti_vector(v: &Value, top: usize) -> Result<Vec<u64>, String> {
    let map = v["betti"].as_object().ok_or("payload has no betti map")?;
    let mut out = vec![0; top + 1];
    for (degree, n) in map {
        let d: usize = degree
            .parse()
            .ok()
            .filter(|&d| d <= top)
            .ok_or_else(|| format!("unexpected degree {degree}"))?;
        out[d] = n.as_u64().ok_or("non-integer Betti number")?;
    }
    Ok(out)
}

fn expect_eq<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> Check {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: got {got:?}, expected {want:?}"))
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn criterion_1() -> Check {
    let v = payload(Command::Betti, "t4_z2z2.json", Twist::Trivial)?;
    expect_eq("betti", betti_vector(&v, 4)?, vec![1, 8, 18, 8, 1])
}

fn criterion_2() -> Check {
    let v = payload(Command::Betti, "t4_z2z2.json", Twist::CocycleInduced)?;
    expect_eq("betti", betti_vector(&v, 4)?, vec![1, 0, 18, 0, 1])
}

fn criterion_3() -> Check {
    for k in 0..=4u64 {
        let v = payload(Command::Betti, "t6_z4.json", Twist::LocalSystem(format!("L{k}")))?;
        let b2 = 11 + 5 * k;
        let want = vec![1, 0, b2, 24 - 2 * k, b2, 0, 1];
        expect_eq(&format!("L{k} betti"), betti_vector(&v, 6)?, want)?;
    }
    Ok(())
}

fn criterion_4() -> Check {
    let p = problem("t6_z4.json");
    let q = p.quotient().map_err(|e| e.to_string())?.global();
    let g = q.group();
    // elements are κ^k for k = 0..3
    let kappa = 1;
    for (k, iota) in [(1usize, 1i64), (2, 1), (3, 2)] {
        let s = &q.sectors()[g.class_index(g.power(kappa, k))];
        expect_eq(&format!("iota(kappa^{k})"), s.iota.clone(), rat(iota, 1))?;
    }
    for k in [1usize, 3] {
        let s = &q.sectors()[g.class_index(g.power(kappa, k))];
        expect_eq(&format!("kappa^{k} locus dim"), s.locus.complex_dim(), 0)?;
        expect_eq(&format!("kappa^{k} point orbits"), s.orbits.len(), 16)?;
    }
    let s = &q.sectors()[g.class_index(g.power(kappa, 2))];
    expect_eq("kappa^2 locus dim", s.locus.complex_dim(), 1)?;
    let (mut tori, mut spheres) = (0, 0);
    for (oi, orbit) in s.orbits.iter().enumerate() {
        let h = q
            .orbit_hodge(s, oi, &Character::trivial(&orbit.stabilizer))
            .map_err(|e| e.to_string())?;
        let zero = rat(0, 1);
        let one = rat(1, 1);
        let shape = (h.get(&zero, &zero), h.get(&one, &zero), h.get(&one, &one));
        match shape {
            (1, 1, 1) => tori += 1,
            (1, 0, 1) => spheres += 1,
            other => return Err(format!("orbit {oi} has (h00, h10, h11) = {other:?}")),
        }
    }
    expect_eq("(T^2, S^2) orbit counts", (tori, spheres), (6, 4))
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn criterion_5() -> Check {
    expect_eq("h2 [2,2]", abelian_h2(&[2, 2]), vec![2])?;
    expect_eq("h2 [4]", abelian_h2(&[4]), vec![])?;
    for n in 1..=12 {
        for m in 1..=12 {
            let d = gcd(n, m);
            let want = if d > 1 { vec![d] } else { vec![] };
            expect_eq(&format!("h2 [{n},{m}]"), abelian_h2(&[n, m]), want)?;
        }
    }
    for inv in [[2u64, 2], [4, 6], [3, 9]] {
        let p = gcd(inv[0], inv[1]);
        for c in 0..p {
            let alpha = abelian_cocycle(&inv, &[vec![0, c]]).map_err(|e| e.to_string())?;
            let gamma = phase(&alpha);
            let n = (inv[0] * inv[1]) as usize;
            for x in 0..n {
                let (a, b) = pair(&abelian_coords(&inv, x));
                for y in 0..n {
                    let (a2, b2) = pair(&abelian_coords(&inv, y));
                    let want = Phase::new(rat(c as i64 * (a * b2 - b * a2), p as i64));
                    ensure(gamma[x][y] == want, || {
                        format!("{inv:?} c={c}: phase at ({x},{y}) is {}, expected {want}", gamma[x][y])
                    })?;
                }
            }
        }
    }
    Ok(())
}

fn pair(coords: &[u64]) -> (i64, i64) {
    (coords[0] as i64, coords[1] as i64)
}

fn criterion_6() -> Check {
    let mut tested = 0;
    for inv in [vec![2u64, 2], vec![2, 4], vec![3, 3], vec![4, 4], vec![2, 6], vec![2, 2, 2]] {
        let group = FiniteGroup::abelian(&inv).map_err(|e| e.to_string())?;
        let r = inv.len();
        let bounds: Vec<(usize, usize, u64)> = (0..r)
            .flat_map(|i| (i + 1..r).map(move |j| (i, j)))
            .map(|(i, j)| (i, j, gcd(inv[i], inv[j])))
            .collect();
        let combos: u64 = bounds.iter().map(|b| b.2).product();
        for mut code in 0..combos {
            let mut coeffs = vec![vec![0; r]; r];
            for &(i, j, b) in &bounds {
                coeffs[i][j] = code % b;
                code /= b;
            }
            let base = abelian_cocycle(&inv, &coeffs).map_err(|e| e.to_string())?;
            // coboundaries keep the class but move the representative
            for den in [1i64, 5, 7] {
                let rho: Vec<Phase> = group
                    .elements()
                    .map(|g| if g == 0 { Phase::zero() } else { Phase::new(rat(g as i64, den)) })
                    .collect();
                let alpha = base.add(&coboundary(&group, &rho).map_err(|e| e.to_string())?);
                let center = twisted_center(&group, &alpha);
                let regular = alpha_regular_classes(&group, &alpha).len();
                expect_eq(&format!("{inv:?} {coeffs:?} 1/{den} center dim"), center.dimension, regular)?;
                tested += 1;
            }
        }
    }
    for (name, gens) in nonabelian_generators() {
        let (group, _) = close_matrix_group(&gens, 64).map_err(|e| e.to_string())?;
        let alpha = Cocycle::trivial(&group);
        let center = twisted_center(&group, &alpha);
        expect_eq(&format!("{name} center dim"), center.dimension, group.conjugacy_classes().len())?;
        tested += 1;
    }
    let v4 = FiniteGroup::abelian(&[2, 2]).map_err(|e| e.to_string())?;
    let twisted = abelian_cocycle(&[2, 2], &[vec![0, 1]]).map_err(|e| e.to_string())?;
    expect_eq("Z2xZ2 twisted center", twisted_center(&v4, &twisted).dimension, 1)?;
    expect_eq("Z2xZ2 untwisted center", twisted_center(&v4, &Cocycle::trivial(&v4)).dimension, 4)?;
    ensure(tested > 40, || format!("only {tested} cocycles tested"))
}

/// Orbifold Betti numbers of T⁴/±1 counted by hand: ±1-invariant forms
/// `Λᵖ ⊗ Λ̄^q` of ℂ² (p+q even) plus one class in degree 2 per fixed point.
fn kummer_oracle() -> Vec<u64> {
    let binom = |n: u64, k: u64| -> u64 { (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1)) };
    let mut b = vec![0; 5];
    for p in 0..=2u64 {
        for q in 0..=2u64 {
            if (p + q) % 2 == 0 {
                b[(p + q) as usize] += binom(2, p) * binom(2, q);
            }
        }
    }
    let fixed_points = 2u64.pow(4);
    b[2] += fixed_points;
    b
}

fn criterion_7() -> Check {
    let oracle = kummer_oracle();
    expect_eq("hand count", oracle.clone(), vec![1, 0, 22, 0, 1])?;
    let v = payload(Command::Betti, "kummer_t4_z2.json", Twist::Trivial)?;
    expect_eq("betti", betti_vector(&v, 4)?, oracle)?;
    let s = payload(Command::Sectors, "kummer_t4_z2.json", Twist::Trivial)?;
    let twisted = &s[1];
    expect_eq("point sectors", twisted["orbits"].as_array().map(Vec::len), Some(16))?;
    expect_eq("point sector iota", twisted["iota"].clone(), serde_json::json!([1, 1]))
}

fn int_matrix(rows: &[&[i64]]) -> CycMatrix {
    CycMatrix::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|&x| Cyclotomic::from_int(1, x)).collect())
            .collect(),
    )
}

fn nonabelian_generators() -> Vec<(&'static str, Vec<CycMatrix>)> {
    let i = Cyclotomic::zeta_pow(4, 1);
    let z = Cyclotomic::zero(4);
    vec![
        (
            "S3",
            vec![
                int_matrix(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]]),
                int_matrix(&[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]]),
            ],
        ),
        ("D4", vec![int_matrix(&[&[0, -1], &[1, 0]]), int_matrix(&[&[1, 0], &[0, -1]])]),
        (
            "Q8",
            vec![
                CycMatrix::from_rows(vec![vec![i.clone(), z.clone()], vec![z, -i]]),
                int_matrix(&[&[0, 1], &[-1, 0]]),
            ],
        ),
    ]
}

/// Groups of order at most 8, with abelian invariants where the encoding matches.
fn small_groups() -> Vec<(FiniteGroup, Option<Vec<u64>>)> {
    let mut out: Vec<_> = [
        vec![1u64],
        vec![2],
        vec![3],
        vec![4],
        vec![5],
        vec![6],
        vec![7],
        vec![8],
        vec![2, 2],
        vec![2, 4],
        vec![2, 2, 2],
    ]
    .into_iter()
    .map(|inv| (FiniteGroup::abelian(&inv).unwrap(), Some(inv)))
    .collect();
    for (_, gens) in nonabelian_generators() {
        out.push((close_matrix_group(&gens, 64).unwrap().0, None));
    }
    out
}

/// Quotients from the fixtures, with the abelian invariants of their group.
fn sample_quotients() -> Vec<(String, GlobalQuotient, Option<Vec<u64>>)> {
    [
        "kummer_t4_z2.json",
        "t4_z2z2.json",
        "t6_z4.json",
        "c4_z2z2_linear.json",
        "c3_z4_linear.json",
        "point_z2z2_twisted.json",
        "s3_point.json",
    ]
    .into_iter()
    .map(|name| {
        let p = problem(name);
        let q = match p.quotient().unwrap() {
            Quotient::Linear(x) => x.quotient().clone(),
            Quotient::Torus(x) => x.quotient().clone(),
        };
        (name.to_owned(), q, p.invariants.clone())
    })
    .collect()
}

fn random_cocycle(group: &FiniteGroup, inv: Option<&[u64]>, seed: u64, rho: &[(i64, i64)]) -> Cocycle {
    let base = match inv {
        Some(inv) => {
            let r = inv.len();
            let coeffs: Vec<Vec<u64>> = (0..r)
                .map(|i| {
                    (0..r)
                        .map(|j| if i < j { (seed >> (4 * (i * r + j))) % gcd(inv[i], inv[j]) } else { 0 })
                        .collect()
                })
                .collect();
            abelian_cocycle(inv, &coeffs).unwrap()
        }
        None => Cocycle::trivial(group),
    };
    base.add(&coboundary(group, &random_rho(group, rho)).unwrap())
}

fn random_rho(group: &FiniteGroup, seeds: &[(i64, i64)]) -> Vec<Phase> {
    group
        .elements()
        .map(|g| {
            if g == group.identity() {
                Phase::zero()
            } else {
                let (n, d) = seeds[g % seeds.len()];
                Phase::new(rat(n * (g as i64 + 1), d))
            }
        })
        .collect()
}

fn rho_strategy() -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((0i64..12, 1i64..13), 1..9)
}

fn property<S: Strategy>(name: &str, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Check {
    let mut runner = TestRunner::new(Config {
        cases: PROPERTY_CASES,
        failure_persistence: None,
        ..Config::default()
    });
    runner.run(&strategy, test).map_err(|e| format!("{name}: {e}"))
}

fn criterion_8() -> Check {
    let groups = small_groups();
    let quotients = sample_quotients();
    let gn = groups.len();
    let qn = quotients.len();

    property("coboundary keeps the cocycle identity", (0..gn, any::<u64>(), rho_strategy()), |(gi, seed, rho)| {
        let (g, inv) = &groups[gi];
        let alpha = random_cocycle(g, inv.as_deref(), seed, &rho);
        prop_assert!(Cocycle::new(g, alpha.rows()).is_ok());
        Ok(())
    })?;

    property("coboundary phases vanish on commuting pairs", (0..gn, rho_strategy()), |(gi, rho)| {
        let (g, _) = &groups[gi];
        let gamma = phase(&coboundary(g, &random_rho(g, &rho)).unwrap());
        for a in g.elements() {
            for b in g.elements().filter(|&b| g.commute(a, b)) {
                prop_assert!(gamma[a][b].is_zero());
            }
        }
        Ok(())
    })?;

    property("twisted characters are homomorphisms", (0..gn, any::<u64>(), rho_strategy()), |(gi, seed, rho)| {
        let (g, inv) = &groups[gi];
        let alpha = random_cocycle(g, inv.as_deref(), seed, &rho);
        for x in g.elements() {
            prop_assert_eq!(twisted_character(g, &alpha, x).homomorphism_violation(g), None);
        }
        Ok(())
    })?;

    property("cocycle-induced systems verify", (0..qn, any::<u64>(), rho_strategy()), |(qi, seed, rho)| {
        let (name, q, inv) = &quotients[qi];
        let alpha = random_cocycle(q.group(), inv.as_deref(), seed, &rho);
        let report = verify(q, &from_cocycle(q, &alpha));
        prop_assert!(report.passed(), "{}: {:?}", name, report.violations.first());
        Ok(())
    })?;

    property(
        "hodge tables are integral, dual and sum to Betti numbers",
        (0..qn, any::<u64>(), rho_strategy()),
        |(qi, seed, rho)| {
            let (name, q, inv) = &quotients[qi];
            let alpha = random_cocycle(q.group(), inv.as_deref(), seed, &rho);
            let (h, b) = orbifold_hodge(q, &from_cocycle(q, &alpha))
                .map_err(|e| TestCaseError::fail(format!("{name}: {e}")))?;
            if q.kind() == SpaceKind::Torus {
                prop_assert!(duality_check(&h, q.complex_dim()), "{}", name);
            }
            let mut sums: BTreeMap<Rational, u64> = BTreeMap::new();
            for ((p, qq), n) in h.entries() {
                *sums.entry(p + qq).or_insert(0) += n;
            }
            prop_assert_eq!(&sums, b.entries());
            Ok(())
        },
    )?;

    property("degree shifts of g and g^-1 add to the codimension", (0..qn, 0usize..8), |(qi, gi)| {
        let (_, q, _) = &quotients[qi];
        let g = gi % q.group().order();
        let codim = q.complex_dim() - q.fixed_locus(&[g]).unwrap().complex_dim();
        let sum = q.degree_shift(g) + q.degree_shift(q.group().inv(g));
        prop_assert_eq!(sum, rat(codim as i64, 1));
        Ok(())
    })?;

    property("sector dimensions are integral and non-negative", (0..qn, any::<u64>()), |(qi, seed)| {
        let (name, q, _) = &quotients[qi];
        for s in q.sectors() {
            for (oi, orbit) in s.orbits.iter().enumerate() {
                let stab = orbit.stabilizer.members();
                // a random character on the stabilizer, when one exists
                let values: BTreeMap<usize, Phase> = stab
                    .iter()
                    .map(|&h| {
                        let order = q.group().element_order(h) as i64;
                        (h, Phase::new(rat((seed % 97) as i64 * h as i64, order)))
                    })
                    .collect();
                let chi = Character::from_values(values);
                let chi = if chi.homomorphism_violation(q.group()).is_none() {
                    chi
                } else {
                    Character::trivial(&orbit.stabilizer)
                };
                q.orbit_hodge(s, oi, &chi)
                    .map_err(|e| TestCaseError::fail(format!("{name}: {e}")))?;
            }
        }
        Ok(())
    })
}

fn criterion_9() -> Check {
    let p = problem("c4_z2z2_linear.json");
    let x = match p.quotient().map_err(|e| e.to_string())? {
        Quotient::Linear(x) => x,
        Quotient::Torus(_) => return Err("expected a linear quotient".into()),
    };
    let g = x.group();
    let trivial = Cocycle::trivial(g);
    let twisted = p.cocycle.clone().ok_or("fixture has no cocycle")?;
    ensure(!twisted.is_trivial(), || "fixture cocycle is trivial".into())?;

    let ring = x.ring(&trivial);
    let classes: Vec<usize> = ring.generators.iter().map(|(c, _)| *c).collect();
    expect_eq("untwisted generators", classes.len(), g.order())?;
    for a in g.elements() {
        for b in g.elements() {
            let (ca, cb) = (g.class_index(a), g.class_index(b));
            // products whose degrees do not add up vanish
            let ab = g.mul(a, b);
            let want = if x.degree_shift(a) + x.degree_shift(b) == x.degree_shift(ab) {
                BTreeMap::from([(g.class_index(ab), 1u64)])
            } else {
                BTreeMap::new()
            };
            expect_eq(&format!("x_{a} x_{b}"), ring.product(ca, cb).clone(), want)?;
        }
    }
    // the two generators g, h of the group
    let (a, b) = (1, 2);
    let gh = BTreeMap::from([(g.class_index(g.mul(a, b)), 1u64)]);
    ensure(g.mul(a, b) != a && g.mul(a, b) != b && a != b, || "fixture elements 1, 2 are not generators".into())?;
    expect_eq("x_g x_h", ring.product(g.class_index(a), g.class_index(b)).clone(), gh)?;
    check_ring_laws(&ring, "untwisted")?;

    let tring = x.ring(&twisted);
    let regular: Vec<usize> = tring.generators.iter().map(|(c, _)| *c).collect();
    let unit = g.class_index(g.identity());
    expect_eq("twisted generators", regular, vec![unit])?;
    for a in g.elements().filter(|&a| a != g.identity()) {
        for b in g.elements().filter(|&b| b != g.identity()) {
            let prod = tring.products.get(&(g.class_index(a), g.class_index(b)));
            ensure(prod.is_none_or(|m| m.is_empty()), || format!("twisted x_{a} x_{b} = {prod:?}"))?;
        }
    }
    check_ring_laws(&tring, "twisted")
}

fn check_ring_laws(ring: &orbicoh_core::LinearRing, label: &str) -> Check {
    let unit = ring.generators.iter().find(|(_, iota)| *iota == rat(0, 1)).map(|(c, _)| *c);
    let unit = unit.ok_or_else(|| format!("{label}: no degree-0 generator"))?;
    for (c, _) in &ring.generators {
        let basis = ring.basis(*c);
        expect_eq(&format!("{label}: 1 x_{c}"), ring.multiply(&ring.basis(unit), &basis), basis.clone())?;
        expect_eq(&format!("{label}: x_{c} 1"), ring.multiply(&basis, &ring.basis(unit)), basis)?;
    }
    expect_eq(&format!("{label}: associativity"), ring.associativity_violation(), None)?;
    expect_eq(&format!("{label}: grading"), ring.grading_violation(), None)
}

fn criterion_10() -> Check {
    let v = payload(Command::VerifyLs, "t6_z4.json", Twist::LocalSystem("corrupted".into()))?;
    expect_eq("passed", v["passed"].clone(), Value::Bool(false))?;
    let first = v["violations"]
        .as_array()
        .and_then(|a| a.iter().find(|w| w["axiom"] == 3))
        .ok_or("no axiom-3 violation reported")?;
    // κ is element 1 and κ² is element 2
    expect_eq("witness", first["elements"].clone(), serde_json::json!([1, 1, 2]))?;
    let betti = run(Command::Betti, &fixture("t6_z4.json"), &Twist::LocalSystem("corrupted".into()));
    ensure(betti.is_err(), || "betti accepted the corrupted system".into())
}

fn main() {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("T4/(Z2xZ2) Betti numbers, trivial twist", criterion_1),
        ("T4/(Z2xZ2) Betti numbers, cocycle-induced twist", criterion_2),
        ("T6/Z4 Betti numbers for L0..L4", criterion_3),
        ("T6/Z4 sector inventory", criterion_4),
        ("abelian Schur multipliers and cocycle phases", criterion_5),
        ("twisted center dimension equals alpha-regular count", criterion_6),
        ("Kummer Betti numbers against the hand count", criterion_7),
        ("randomized property suites", criterion_8),
        ("C4/(Z2xZ2) ring, unit, associativity and grading", criterion_9),
        ("corrupted local system fails with an axiom-3 witness", criterion_10),
    ];
    let mut failed = 0;
    for (i, (title, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("PASS criterion {}: {title} ({secs:.1}s)", i + 1),
            Err(e) => {
                failed += 1;
                println!("FAIL criterion {}: {title} ({secs:.1}s): {e}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
    println!("all {} criteria passed", criteria.len());
}
