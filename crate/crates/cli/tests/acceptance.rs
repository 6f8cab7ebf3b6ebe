//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use filtval_core::audit::{
    find_minimal_witness, run_claim, AuditConfig, AuditOptions, ClaimId, Instance, SamplerKind,
    SamplerSpec, Verdict,
};
use filtval_core::filtration::ValidationVerdict;
use filtval_core::{
    nu, Element, Execution, ExtValue, Filtration, Ideal, Primality, RingDescriptor,
};

const MAX_LEVEL: usize = 64;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_filtval"))
}

fn manifest_path(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(rel)
}

fn run(cmd: &mut Command) -> Output {
    cmd.output().expect("spawn filtval")
}

fn within(label: &str, elapsed: Duration, limit: Duration) -> Result<(), String> {
    if elapsed < limit {
        Ok(())
    } else {
        Err(format!("{label} took {elapsed:.2?}, limit {limit:?}"))
    }
}

fn ints(bound: u64) -> SamplerSpec {
    SamplerSpec::new(SamplerKind::BoundedIntegers { bound })
}

fn polys() -> SamplerSpec {
    let mut s = SamplerSpec::new(SamplerKind::BoundedPolys {
        max_degree: 3,
        coefficients: ["0", "1", "-1", "2", "-2"].map(String::from).to_vec(),
    });
    s.pair_budget = Some(100_000);
    s
}

fn adic(ring: RingDescriptor, gen: &str, sampler: SamplerSpec) -> Instance {
    let f = Filtration::adic(Ideal::parse(ring, &[gen]).unwrap());
    Instance::new(f, sampler, MAX_LEVEL, 1).unwrap()
}

/// The theorem-suite instances, reused by the oracle and minimum criteria.
fn suite() -> Vec<Instance> {
    let z = RingDescriptor::integers();
    let residues = || SamplerSpec::new(SamplerKind::ExhaustiveResidues);
    vec![
        adic(z, "2", ints(200)),
        adic(z, "3", ints(200)),
        adic(z, "4", ints(200)),
        adic(z, "6", ints(200)),
        adic(RingDescriptor::zmod(8).unwrap(), "2", residues()),
        adic(RingDescriptor::zmod(12).unwrap(), "2", residues()),
        adic(RingDescriptor::zmod(12).unwrap(), "3", residues()),
        adic(RingDescriptor::poly_q(), "x", polys()),
        adic(RingDescriptor::poly_zmod(5).unwrap(), "x", polys()),
    ]
}

fn opts() -> AuditOptions {
    AuditOptions::default()
}

fn witness_pair(v: &Verdict) -> Option<(&str, &str, ExtValue, ExtValue)> {
    v.witness()
        .map(|w| (w.a.as_str(), w.b.as_str(), w.lhs, w.rhs))
}

fn theorem_suite() -> Check {
    let started = Instant::now();
    let (mut pairs, mut undecided) = (0u64, 0u64);
    for inst in suite() {
        for claim in [ClaimId::QvSuperadd, ClaimId::QvMin] {
            let v = run_claim(claim, &inst, &opts()).map_err(|e| e.to_string())?;
            ensure!(
                !matches!(v, Verdict::Fails { .. }),
                "{claim} fails on {}: {v:?}",
                inst.label
            );
            ensure!(
                v.pairs_tested() > 0,
                "{claim} on {} tested nothing: {v:?}",
                inst.label
            );
            pairs += v.pairs_tested();
            undecided += v.inconclusive();
        }
    }
    let elapsed = started.elapsed();
    let rate = undecided as f64 / pairs as f64;
    if rate >= 0.01 {
        return Err(format!("inconclusive rate {rate:.4}"));
    }
    within("theorem suite", elapsed, Duration::from_secs(60))?;
    Ok(format!(
        "{pairs} pairs, 0 fails, inconclusive rate {rate:.4}, {elapsed:.2?}"
    ))
}

/// Levels rebuilt by repeated ideal products and scanned with direct
/// membership tests.
fn level_scan(base: &Ideal, a: &Element) -> ExtValue {
    if a.is_zero() {
        return ExtValue::Infinity;
    }
    let mut level = Ideal::unit(base.ring());
    for i in 0..MAX_LEVEL {
        let next = level.mul(base).unwrap();
        if !next.contains(a).unwrap() {
            return ExtValue::Finite(i as u64);
        }
        if next.mul(base).unwrap().same_as(&next).unwrap() {
            return ExtValue::Infinity;
        }
        level = next;
    }
    ExtValue::AtLeast(MAX_LEVEL as u64)
}

fn repeated_division(mut a: i64, p: i64) -> u64 {
    let mut v = 0;
    while a % p == 0 {
        a /= p;
        v += 1;
    }
    v
}

fn oracle_equivalence() -> Check {
    let mut checked = 0usize;
    for inst in suite() {
        let base = inst.filtration.adic_base().unwrap().clone();
        for a in &inst.elements {
            let got = nu(&inst.filtration, a, MAX_LEVEL).map_err(|e| e.to_string())?;
            let want = level_scan(&base, a);
            ensure!(
                got == want,
                "{}: nu({a}) = {got}, level scan {want}",
                inst.label
            );
            checked += 1;
        }
    }
    let z = RingDescriptor::integers();
    for p in [2i64, 3, 5] {
        let f = Filtration::adic(Ideal::parse(z, &[p.to_string()]).unwrap());
        for a in (-10_000..=10_000i64).filter(|&a| a != 0) {
            let got = nu(&f, &Element::from_int(z, a), MAX_LEVEL).map_err(|e| e.to_string())?;
            let want = ExtValue::Finite(repeated_division(a, p));
            ensure!(
                got == want,
                "({p})-adic nu({a}) = {got}, division count {want}"
            );
            checked += 1;
        }
    }
    Ok(format!("{checked} values, 0 mismatches"))
}

fn separation() -> Check {
    let started = Instant::now();
    let inst = adic(RingDescriptor::integers(), "4", ints(200));
    let strong = run_claim(ClaimId::ValStrong, &inst, &opts()).map_err(|e| e.to_string())?;
    ensure!(
        witness_pair(&strong) == Some(("2", "2", ExtValue::Finite(1), ExtValue::Finite(0))),
        "VAL_STRONG: {strong:?}"
    );
    let minimal = find_minimal_witness(ClaimId::ValStrong, &inst, Execution::Parallel)
        .map_err(|e| e.to_string())?;
    ensure!(
        minimal.as_ref() == strong.witness(),
        "minimal witness {minimal:?}"
    );
    let superadd = run_claim(ClaimId::QvSuperadd, &inst, &opts()).map_err(|e| e.to_string())?;
    ensure!(
        matches!(superadd, Verdict::Holds { .. }),
        "QV_SUPERADD: {superadd:?}"
    );
    let elapsed = started.elapsed();
    within("separation", elapsed, Duration::from_secs(1))?;
    Ok(format!(
        "VAL_STRONG fails at (2,2): 1 vs 0; QV_SUPERADD holds; {elapsed:.2?}"
    ))
}

fn prime_adic_additivity() -> Check {
    let started = Instant::now();
    for p in ["2", "3", "5"] {
        let inst = adic(RingDescriptor::integers(), p, ints(200));
        let v = run_claim(ClaimId::ValPrimeAdic, &inst, &opts()).map_err(|e| e.to_string())?;
        ensure!(
            v == Verdict::Holds {
                pairs_tested: 401 * 401
            },
            "({p}): {v:?}"
        );
    }
    let elapsed = started.elapsed();
    within("prime-adic additivity", elapsed, Duration::from_secs(10))?;
    Ok(format!("3 x 160801 pairs hold, {elapsed:.2?}"))
}

fn inf_preimage(inst: &Instance) -> Result<Vec<String>, String> {
    let mut out = Vec::new();
    for a in &inst.elements {
        if nu(&inst.filtration, a, MAX_LEVEL).map_err(|e| e.to_string())? == ExtValue::Infinity {
            out.push(a.to_string());
        }
    }
    Ok(out)
}

fn non_domain_boundary() -> Check {
    let started = Instant::now();
    let residues = || SamplerSpec::new(SamplerKind::ExhaustiveResidues);
    let z12 = adic(RingDescriptor::zmod(12).unwrap(), "2", residues());
    let base = z12.filtration.adic_base().unwrap();
    ensure!(
        base.is_prime() == Primality::Prime,
        "(2) in Z/12: {:?}",
        base.is_prime()
    );
    ensure!(
        z12.filtration.stabilization_index(MAX_LEVEL) == Some(2),
        "stabilization index {:?}",
        z12.filtration.stabilization_index(MAX_LEVEL)
    );
    let four = Element::from_int(z12.ring(), 4);
    ensure!(
        nu(&z12.filtration, &four, MAX_LEVEL) == Ok(ExtValue::Infinity),
        "nu(4) not infinity"
    );
    for claim in [ClaimId::ValPrimeAdic, ClaimId::NuclosedPrimeAdic] {
        let v = run_claim(claim, &z12, &opts()).map_err(|e| e.to_string())?;
        ensure!(
            witness_pair(&v) == Some(("2", "2", ExtValue::Infinity, ExtValue::Finite(2))),
            "{claim} on Z/12 (2): {v:?}"
        );
    }
    ensure!(
        inf_preimage(&z12)? == ["0", "4", "8"],
        "Z/12 inf preimage {:?}",
        inf_preimage(&z12)?
    );

    let z6 = adic(RingDescriptor::zmod(6).unwrap(), "3", residues());
    for claim in [ClaimId::NuclosedPrimeAdic, ClaimId::NuclosedStrong] {
        let v = run_claim(claim, &z6, &opts()).map_err(|e| e.to_string())?;
        ensure!(
            v == Verdict::Holds { pairs_tested: 36 },
            "{claim} on Z/6 (3): {v:?}"
        );
    }
    ensure!(
        inf_preimage(&z6)? == ["0", "3"],
        "Z/6 inf preimage {:?}",
        inf_preimage(&z6)?
    );
    let elapsed = started.elapsed();
    within("non-domain boundary", elapsed, Duration::from_secs(1))?;
    Ok(format!(
        "Z/12 (2) fails at (2,2); Z/6 (3) holds; {elapsed:.2?}"
    ))
}

fn golden_table() -> Check {
    let out = run(bin().args([
        "table", "--ring", "Zmod:8", "--adic", "2", "--format", "csv",
    ]));
    let golden = std::fs::read(manifest_path("tests/golden/table_zmod8_adic2.csv")).unwrap();
    ensure!(out.status.success(), "exit {:?}", out.status.code());
    ensure!(
        out.stdout == golden,
        "stdout differs from golden:\n{}",
        String::from_utf8_lossy(&out.stdout)
    );
    Ok("8 rows byte-identical to golden file".into())
}

fn bundled_config() -> AuditConfig {
    AuditConfig::from_json(&std::fs::read_to_string(manifest_path("configs/default.json")).unwrap())
        .unwrap()
}

fn filtration_validation() -> Check {
    let out = run(bin().args([
        "validate",
        "--ring",
        "Z",
        "--chain",
        r#"[["1"],["2"],["3"]]"#,
    ]));
    ensure!(out.status.code() == Some(1), "exit {:?}", out.status.code());
    let stdout = String::from_utf8_lossy(&out.stdout);
    ensure!(
        stdout == "FAILS condition ii at n=1: 3 not in (2)\n",
        "stdout {stdout:?}"
    );
    let config = bundled_config();
    for (i, spec) in config.instances.iter().enumerate() {
        let inst = Instance::from_spec(spec, &config, i).map_err(|e| e.to_string())?;
        let verdict = inst.filtration.validate(16);
        ensure!(
            verdict == ValidationVerdict::Holds { depth: 16 },
            "{}: {verdict:?}",
            inst.label
        );
    }
    Ok(format!(
        "chain rejected at condition ii, n=1; {} bundled instances hold to depth 16",
        config.instances.len()
    ))
}

fn audit_once(
    dir: &tempfile::TempDir,
    name: &str,
) -> Result<(i32, String, serde_json::Value), String> {
    let path = dir.path().join(name);
    let out = run(bin()
        .arg("audit")
        .arg("--config")
        .arg(manifest_path("configs/default.json"))
        .arg("--out")
        .arg(&path));
    let stdout = String::from_utf8_lossy(&out.stdout).into_owned();
    let printed = stdout
        .lines()
        .find_map(|l| l.strip_prefix("content-hash: "))
        .ok_or("no content-hash line")?
        .to_string();
    let mut report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
    ensure!(
        report["header"]["contentHash"] == printed.as_str(),
        "printed hash differs from report"
    );
    report.as_object_mut().unwrap().remove("timings");
    Ok((out.status.code().unwrap_or(-1), printed, report))
}

fn determinism() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let (code1, hash1, report1) = audit_once(&dir, "first.json")?;
    let (code2, hash2, report2) = audit_once(&dir, "second.json")?;
    ensure!(hash1 == hash2, "content hashes differ: {hash1} vs {hash2}");
    ensure!(report1 == report2, "reports differ outside timings");
    ensure!(code1 == 1 && code2 == 1, "exit codes {code1}, {code2}");
    let failing_four = report1["cells"].as_array().unwrap().iter().any(|c| {
        c["claim"] == "VAL_STRONG" && c["instance"] == "Z (4)-adic" && c["status"] == "fails"
    });
    ensure!(
        failing_four,
        "VAL_STRONG does not fail on the (4)-adic instance"
    );
    Ok(format!("content hash {}, exit 1 twice", &hash1[..16]))
}

fn sharpened_minimum() -> Check {
    let mut checked = 0u64;
    for inst in suite() {
        let f = &inst.filtration;
        let values: Vec<ExtValue> = inst
            .elements
            .iter()
            .map(|a| nu(f, a, MAX_LEVEL).unwrap())
            .collect();
        let rows: Vec<usize> = (0..inst.elements.len()).collect();
        let failures = Execution::Parallel.map(&rows, |&i| {
            let (a, ExtValue::Finite(x)) = (&inst.elements[i], values[i]) else {
                return (0u64, None);
            };
            let mut count = 0;
            for (b, &vb) in inst.elements.iter().zip(&values) {
                let ExtValue::Finite(y) = vb else { continue };
                if x == y {
                    continue;
                }
                count += 1;
                let sum = nu(f, &a.add(b).unwrap(), MAX_LEVEL).unwrap();
                if sum != ExtValue::Finite(x.min(y)) {
                    return (
                        count,
                        Some(format!("{}: nu({a} + {b}) = {sum}", inst.label)),
                    );
                }
            }
            (count, None)
        });
        for (count, failure) in failures {
            checked += count;
            if let Some(msg) = failure {
                return Err(msg);
            }
        }
    }
    Ok(format!(
        "{checked} pairs with finite unequal values, 0 failures"
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("theorem suite", theorem_suite),
        ("oracle equivalence of nu", oracle_equivalence),
        ("quasi vs valuation separation", separation),
        ("prime-adic additivity", prime_adic_additivity),
        ("non-domain boundary", non_domain_boundary),
        ("valuation table golden file", golden_table),
        ("filtration validation", filtration_validation),
        ("audit determinism", determinism),
        ("sharpened minimum", sharpened_minimum),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.into_iter().enumerate() {
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|panic| {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match result {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
