//! Acceptance suite. Prints one line per criterion and exits nonzero if any
//! criterion fails.

mod common;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use blowup_chern::chern::{dual_total_class, tensor_line_bundle, total_inverse};
use blowup_chern::io::{parse_model, to_model_text, ParseError};
use blowup_chern::thom::thom_ring;
use blowup_chern::{catalog, BlowupContext, GeneratorSpec, GradedElement, Ring, SignConvention};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Every numeric comparison below is between exact integers.
const TOLERANCE: i128 = 0;
const S6_TIME_LIMIT: Duration = Duration::from_secs(1);
const PATH_TIME_LIMIT: Duration = Duration::from_secs(30);
const RANDOM_EMBEDDINGS: usize = 120;
const PROPERTY_CASES: u32 = 200;
const MIN_MALFORMED: usize = 10;

/// Coefficients printed for the blown-up six-sphere: `1 − 2x − 4x³`.
const PRINTED_S6_MAGNITUDES: [i128; 2] = [2, 4];

const CATALOG: [&str; 11] = [
    "s6_point",
    "p2_point",
    "p3_point",
    "p4_point",
    "p4_line",
    "pn_point(1)",
    "pn_point(2)",
    "pn_point(3)",
    "pn_point(5)",
    "pn_point(6)",
    "pn_point:4",
];

type Outcome = Result<String, String>;

fn exact(got: i128, want: i128, what: &str) -> Result<(), String> {
    if (got - want).abs() <= TOLERANCE {
        Ok(())
    } else {
        Err(format!("{what}: got {got}, expected {want}"))
    }
}

fn ctx(name: &str, conv: SignConvention) -> BlowupContext {
    BlowupContext::new(catalog::load(name).unwrap(), conv).unwrap()
}

fn number(ctx: &BlowupContext, parts: &[u32]) -> i128 {
    let total = ctx.total_chern().unwrap();
    ctx.chern_numbers(&total).unwrap()[&parts.to_vec()]
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = blowup_chern::cli::run(["blowup-chern", "chern", "s6_point", "--format", "json"], &mut out, &mut err);
    let elapsed = start.elapsed();
    if code != 0 {
        return Err(format!("exit {code}: {}", String::from_utf8_lossy(&err)));
    }
    let doc: blowup_chern::io::ResultDocument = serde_json::from_slice(&out).map_err(|e| e.to_string())?;
    let w1: i128 = doc
        .chern
        .iter()
        .filter(|e| e.weight == 1)
        .flat_map(|e| e.m_part.iter().chain(e.omega_parts.values().flatten()))
        .map(|t| t.coefficient)
        .sum();
    exact(w1.abs(), PRINTED_S6_MAGNITUDES[0], "|weight-1 coefficient|")?;
    let c3 = doc.chern_numbers.as_ref().ok_or("no Chern numbers")?["c3"];
    exact(c3, PRINTED_S6_MAGNITUDES[1], "<c3>")?;
    // χ(S⁶) + (3 − 1)·χ(point)
    exact(c3, 2 + 2, "<c3> against Euler characteristic")?;
    let w3: Vec<i128> = doc
        .chern
        .iter()
        .filter(|e| e.weight == 3)
        .flat_map(|e| e.m_part.iter().chain(e.omega_parts.values().flatten()))
        .map(|t| t.coefficient.abs())
        .collect();
    if w3 != [PRINTED_S6_MAGNITUDES[1]] {
        return Err(format!("weight-3 coefficients {w3:?}"));
    }
    if elapsed > S6_TIME_LIMIT {
        return Err(format!("took {elapsed:?}"));
    }
    Ok(format!("C = {}, <c3> = {c3}, {elapsed:.2?}", doc.display))
}

fn criterion_2() -> Outcome {
    // c1 = 3H − E with H² = 1, H·E = 0, E² = −1; Noether: c1² + c2 = 12.
    let c1_sq_oracle = 3 * 3 - 1;
    let c2_oracle = 12 - c1_sq_oracle;
    let c = ctx("p2_point", SignConvention::Calibrated);
    let c1_sq = number(&c, &[1, 1]);
    let c2 = number(&c, &[2]);
    exact(c1_sq, c1_sq_oracle, "<c1^2>")?;
    exact(c2, c2_oracle, "<c2>")?;
    exact(c2, 4, "<c2>")?;
    exact(c1_sq, 8, "<c1^2>")?;
    Ok(format!("<c1^2> = {c1_sq}, <c2> = {c2}"))
}

fn criterion_3() -> Outcome {
    // c1 = 4H − 2E with H³ = 1, E³ = 1, mixed products 0; Todd genus c1·c2/24 = 1;
    // c3 = χ = 4 + 2.
    let c1_cubed_oracle = 4i128.pow(3) + (-2i128).pow(3);
    let c1c2_oracle = 24;
    let c3_oracle = 4 + 2;
    let c = ctx("p3_point", SignConvention::Calibrated);
    let (a, b, d) = (number(&c, &[1, 1, 1]), number(&c, &[2, 1]), number(&c, &[3]));
    exact(a, c1_cubed_oracle, "<c1^3>")?;
    exact(b, c1c2_oracle, "<c1 c2>")?;
    exact(d, c3_oracle, "<c3>")?;
    Ok(format!("<c1^3> = {a}, <c1 c2> = {b}, <c3> = {d}"))
}

fn euler_pair(c: &BlowupContext) -> (i128, i128) {
    let model = c.model();
    let chi_m = model.ambient().euler_characteristic().unwrap();
    let chi_x = model.center().euler_characteristic().unwrap();
    let total = c.total_chern().unwrap();
    let got = c.integrate(&total.component(c.dimension())).unwrap();
    (got, chi_m + (c.k() as i128 - 1) * chi_x)
}

fn criterion_4() -> Outcome {
    let mut seen = Vec::new();
    for name in CATALOG {
        let c = ctx(name, SignConvention::Calibrated);
        let (got, want) = euler_pair(&c);
        exact(got, want, name)?;
        seen.push(format!("{name}={got}"));
    }
    let expected_chi = [("p2_point", 4), ("p3_point", 6), ("p4_point", 8), ("p4_line", 9), ("s6_point", 4)];
    for (name, chi) in expected_chi {
        exact(euler_pair(&ctx(name, SignConvention::Calibrated)).0, chi, name)?;
    }
    let (literal_chi, want) = euler_pair(&ctx("p3_point", SignConvention::Literal));
    exact(literal_chi, 2, "p3_point under the literal signs")?;
    if literal_chi == want {
        return Err("literal signs unexpectedly satisfy the Euler identity on p3_point".into());
    }
    for name in ["p2_point", "p4_point", "pn_point(6)"] {
        let (got, want) = euler_pair(&ctx(name, SignConvention::Literal));
        exact(got, want, &format!("{name} under the literal signs"))?;
    }
    Ok(format!("{}; literal signs on p3_point give {literal_chi} (≠ {want})", seen.join(", ")))
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    for name in CATALOG {
        for conv in [SignConvention::Calibrated, SignConvention::Literal] {
            let c = ctx(name, conv);
            if c.total_chern().unwrap() != c.total_chern_via_thom().unwrap() {
                return Err(format!("{name} ({conv})"));
            }
            checked += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut ks = BTreeMap::new();
    for i in 0..RANDOM_EMBEDDINGS {
        let (shape, model) = common::random_embedding(&mut rng, 6, 4);
        *ks.entry(shape.k()).or_insert(0) += 1;
        let conv = if i % 2 == 0 { SignConvention::Calibrated } else { SignConvention::Literal };
        let c = BlowupContext::new(model, conv).unwrap();
        let closed = c.total_chern().unwrap();
        let thom = c.total_chern_via_thom().unwrap();
        if closed != thom {
            return Err(format!("random embedding {shape:?} ({conv}) differs in weight {:?}", c.first_difference(&closed, &thom)));
        }
        checked += 1;
    }
    let elapsed = start.elapsed();
    if elapsed > PATH_TIME_LIMIT {
        return Err(format!("took {elapsed:?}"));
    }
    Ok(format!("{checked} comparisons (random codimensions {ks:?}), {elapsed:.2?}"))
}

fn criterion_6() -> Outcome {
    for name in CATALOG {
        let c = ctx(name, SignConvention::Calibrated);
        let lhs = c.restrict_to_e(&c.total_chern().unwrap()).unwrap();
        let e = c.exceptional();
        let rhs = &c.exceptional_chern().unwrap() * &(&e.ring.one() + &e.t);
        if lhs != rhs {
            return Err(format!("{name}: {lhs} vs {rhs}"));
        }
    }
    let c = ctx("p2_point", SignConvention::Calibrated);
    let e = c.exceptional();
    let one_minus_t = &e.ring.one() - &e.t;
    let lhs = c.restrict_to_e(&c.total_chern().unwrap()).unwrap();
    let rhs = &c.exceptional_chern().unwrap() * &(&e.ring.one() + &e.t);
    if lhs != one_minus_t || rhs != one_minus_t {
        return Err(format!("blown-up plane: {lhs} and {rhs}, expected 1 - t"));
    }
    Ok(format!("{} models; blown-up plane gives {} on both sides", CATALOG.len(), lhs.pretty()))
}

fn criterion_7() -> Outcome {
    for name in CATALOG {
        let c = ctx(name, SignConvention::Calibrated);
        let structural = c.ranks();
        let generated = c.generated_ranks().unwrap();
        if structural != generated {
            return Err(format!("{name}: {structural:?} vs {generated:?}"));
        }
        // rank H^{2j}(M̃) = rank H^{2j}(M) + Σ_{1≤r<k} rank H^{2(j−r)}(X), from the model rings.
        let m = c.m_ring();
        let x = c.x_ring();
        for (j, &r) in structural.iter().enumerate() {
            let j = j as u32;
            let want = m.rank(j) + (1..c.k().min(j + 1)).map(|s| x.rank(j - s)).sum::<usize>();
            if r != want {
                return Err(format!("{name} weight {j}: {r} vs {want}"));
            }
        }
    }
    let line = ctx("p4_line", SignConvention::Calibrated).ranks();
    if line != [1, 2, 3, 2, 1] {
        return Err(format!("p4_line ranks {line:?}"));
    }
    Ok(format!("p4_line ranks {line:?}, sum {}", line.iter().sum::<usize>()))
}

fn runner() -> TestRunner {
    TestRunner::new_with_rng(
        Config { cases: PROPERTY_CASES, failure_persistence: None, ..Config::default() },
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    )
}

/// A small ring drawn from a few shapes, including one with torsion and one
/// with a relation between mixed monomials.
fn random_ring(rng: &mut ChaCha8Rng) -> Ring {
    let shape = rng.gen_range(0..4);
    let spec: Vec<(&str, u32)> = match shape {
        0 => vec![("a", 1)],
        1 => vec![("a", 1), ("b", 1)],
        2 => vec![("a", 1), ("b", 2)],
        _ => vec![("a", 1), ("b", 1), ("c", 2)],
    };
    let gens: Vec<GeneratorSpec> = spec.iter().map(|(n, w)| GeneratorSpec::new(*n, *w)).collect();
    let free = Ring::free(gens.clone()).unwrap();
    let trunc = rng.gen_range(2..=4);
    let mut rels = Vec::new();
    for _ in 0..rng.gen_range(0..=2) {
        let w = rng.gen_range(2..=trunc);
        let r = common::random_homogeneous(rng, &free, w, 2);
        if !r.is_zero() {
            rels.push(if rng.gen_bool(0.3) { r.scale(2) } else { r });
        }
    }
    Ring::new(gens, rels, trunc).unwrap()
}

fn random_element(rng: &mut ChaCha8Rng, ring: &Ring) -> GradedElement {
    random_up_to(rng, ring, ring.truncation())
}

fn random_up_to(rng: &mut ChaCha8Rng, ring: &Ring, top: u32) -> GradedElement {
    let mut acc = ring.zero();
    for w in 0..=top {
        acc += &common::random_homogeneous(rng, ring, w, 3);
    }
    acc
}

fn random_total(rng: &mut ChaCha8Rng, ring: &Ring) -> GradedElement {
    let e = random_element(rng, ring);
    &(&e - &e.component(0)) + &ring.one()
}

fn property(name: &str, check: impl Fn(&mut ChaCha8Rng) -> Result<(), String>) -> Result<(), String> {
    runner()
        .run(&any::<u64>(), |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            check(&mut rng).map_err(TestCaseError::fail)
        })
        .map_err(|e| format!("{name}: {e}"))
}

fn criterion_8() -> Outcome {
    property("ring axioms", |rng| {
        let r = random_ring(rng);
        let (a, b, c) = (random_element(rng, &r), random_element(rng, &r), random_element(rng, &r));
        let ok = &(&a * &b) * &c == &a * &(&b * &c)
            && &a * &b == &b * &a
            && &a * &(&b + &c) == &(&a * &b) + &(&a * &c)
            && &a * &r.one() == a
            && &a + &r.zero() == a
            && (&a + &(&r.zero() - &a)).is_zero();
        ok.then_some(()).ok_or_else(|| format!("axioms fail in {r:?} for {a}, {b}, {c}"))
    })?;
    property("normal form", |rng| {
        let r = random_ring(rng);
        let free = r.free_ring();
        let raw = random_up_to(rng, &free, r.truncation() + 1);
        let nf = raw.transport(&r).unwrap();
        if nf.normal_form() != nf {
            return Err(format!("not idempotent on {raw}"));
        }
        for rel in r.relations() {
            let m = random_up_to(rng, &free, r.truncation());
            let multiple = (&rel * &m).transport(&r).unwrap();
            if !multiple.is_zero() {
                return Err(format!("relation multiple {multiple} survives"));
            }
        }
        Ok(())
    })?;
    property("inverse law", |rng| {
        let r = random_ring(rng);
        let c = random_total(rng, &r);
        let inv = total_inverse(&c).map_err(|e| e.to_string())?;
        let d = random_total(rng, &r);
        let dual_ok = dual_total_class(&dual_total_class(&c)) == c
            && dual_total_class(&(&c * &d)) == &dual_total_class(&c) * &dual_total_class(&d);
        (&c * &inv == r.one() && dual_ok).then_some(()).ok_or_else(|| format!("fails for {c}"))
    })?;
    property("line-bundle tensor vs splitting", |rng| {
        let m = rng.gen_range(0..=4u32);
        let gens: Vec<GeneratorSpec> = ["u1", "u2", "u3"].iter().map(|n| GeneratorSpec::new(*n, 1)).collect();
        let r = Ring::new(gens, vec![], m + 1).unwrap();
        let lin = |rng: &mut ChaCha8Rng| common::random_homogeneous(rng, &r, 1, 3);
        let t = lin(rng);
        let roots: Vec<GradedElement> = (0..m).map(|_| lin(rng)).collect();
        let c_xi = roots.iter().fold(r.one(), |acc, s| &acc * &(&r.one() + s));
        let via_roots = roots.iter().fold(r.one(), |acc, s| &acc * &(&(&r.one() + &t) + s));
        let formula = tensor_line_bundle(&t, &c_xi, m).map_err(|e| e.to_string())?;
        (formula == via_roots).then_some(()).ok_or_else(|| format!("rank {m}: {formula} vs {via_roots}"))
    })?;
    property("Thom isomorphism", |rng| {
        let base = random_ring(rng);
        let e = common::random_homogeneous(rng, &base, 1, 2);
        let thom = thom_ring(&base, &e).map_err(|e| e.to_string())?;
        let amb = thom.ambient();
        let x = thom.x();
        if !(x * x + x * &thom.include(&e).unwrap()).is_zero() {
            return Err("x^2 + x e survives".into());
        }
        for d in 0..=base.truncation() {
            if amb.rank(d + 1) != base.rank(d + 1) + base.rank(d) {
                return Err(format!("rank mismatch in weight {}", d + 1));
            }
            for m in base.graded_basis(d).basis {
                let b = base.monomial(&m);
                let image = &thom.include(&b).unwrap() * x;
                let back = thom.decompose(&image).map_err(|e| e.to_string())?;
                if back.constant != 0 || back.x_part != b {
                    return Err(format!("x·{b} decomposes as {back:?}"));
                }
            }
            let a = common::random_homogeneous(rng, &base, d, 3);
            let image = &thom.include(&a).unwrap() * x;
            if image.is_zero() != a.is_zero() || thom.decompose(&image).map_err(|e| e.to_string())?.x_part != a {
                return Err(format!("multiplication by x loses {a}"));
            }
        }
        Ok(())
    })?;
    Ok(format!("5 suites × {PROPERTY_CASES} cases"))
}

fn criterion_9() -> Outcome {
    for name in CATALOG {
        let text = catalog::source(name).unwrap();
        let once = parse_model(&text).map_err(|e| format!("{name}: {e}"))?;
        let twice = parse_model(&to_model_text(&once)).map_err(|e| format!("{name} reparse: {e}"))?;
        if once != twice {
            return Err(format!("{name} does not round-trip"));
        }
    }
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/malformed");
    let mut files: Vec<PathBuf> = std::fs::read_dir(&dir)
        .map_err(|e| e.to_string())?
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "model"))
        .collect();
    files.sort();
    if files.len() < MIN_MALFORMED {
        return Err(format!("only {} malformed files", files.len()));
    }
    for f in &files {
        let text = std::fs::read_to_string(f).unwrap();
        let header = text.lines().next().unwrap_or_default();
        let expect = header.strip_prefix("# expect: ").ok_or_else(|| format!("{}: no header", f.display()))?;
        let (kind, at) = expect.split_once(' ').unwrap();
        let (line, column) = at.split_once(':').unwrap();
        let err = match parse_model(&text) {
            Ok(_) => return Err(format!("{} parsed", f.display())),
            Err(e) => e,
        };
        let kind_ok = match kind {
            "syntax" => matches!(err, ParseError::Syntax { .. }),
            "semantic" => matches!(err, ParseError::Semantic { .. }),
            _ => false,
        };
        let pos = err.pos();
        if !kind_ok || pos.line.to_string() != line || pos.column.to_string() != column {
            return Err(format!("{}: expected {expect}, got `{err}`", f.file_name().unwrap().to_string_lossy()));
        }
    }
    Ok(format!("{} catalog round trips, {} malformed files with positions", CATALOG.len(), files.len()))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 9] = [
        ("blown-up six-sphere: |c1 coefficient| = 2, <c3> = 4", criterion_1),
        ("blown-up plane: <c1^2> = 8, <c2> = 4", criterion_2),
        ("blown-up three-space: <c1^3> = 56, <c1 c2> = 24, <c3> = 6", criterion_3),
        ("Euler identity on the catalog; literal signs fail on p3_point", criterion_4),
        ("closed formula = Thom-space chain on catalog and random embeddings", criterion_5),
        ("restriction to E equals C(E)(1+t)", criterion_6),
        ("graded ranks of the blow-up", criterion_7),
        ("property suites", criterion_8),
        ("parser round trips and positioned diagnostics", criterion_9),
    ];
    let mut failed = 0;
    for (i, (title, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {title}  [{detail}]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {title}  [{why}]", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
