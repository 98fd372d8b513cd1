//! Command-line interface: group inspection, dual computation, Fourier
//! checks, homogeneous dimensions, solution families, tuple classification,
//! special equations, and aggregated verification. All output is a JSON
//! report that is byte-identical for a fixed seed.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use groupfeq::admissible::{classify, TupleJson};
use groupfeq::fourier::{
    central_part, inverse_transform, plancherel_defect, transform, GroupFunction,
};
use groupfeq::group::{catalog, FiniteGroup, GroupSpec};
use groupfeq::linalg::{random_complex_matrix, random_complex_vector};
use groupfeq::repr::{
    compute_unitary_dual, compute_unitary_dual_cached, verify_irrep, UnitaryDual,
};
use groupfeq::solver::{
    decompose, homogeneous_basis_bruteforce, homogeneous_basis_structured,
    homogeneous_dimension_predicted, matrixeq_residual, pure_families, residual,
    tuple_to_vector,
};
use groupfeq::special::{
    dalembert_newton_probe, dalembert_residual, dalembert_solutions, gen1_build,
    gen1_families, gen1_residual, long_dalembert_check, long_wilson_build,
    long_wilson_families, long_wilson_residual, su2_homomorphisms, wilson_families,
    wilson_residual, Gen1Family, HomOrigin, LongWilsonFamily,
};

#[derive(Parser)]
#[command(name = "groupfeq", version, about = "Functional equations on finite groups")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// Path to a group spec JSON file, or a catalog name (s3, q8, d4, ...)
    #[arg(long, env = "GROUPFEQ_GROUP")]
    group: String,
    /// Seed for every pseudo-random stream
    #[arg(long, default_value_t = 0, env = "GROUPFEQ_SEED")]
    seed: u64,
    /// Numerical tolerance
    #[arg(long, default_value_t = 1e-8, env = "GROUPFEQ_TOL")]
    tol: f64,
    /// Write the JSON report here instead of stdout
    #[arg(long, env = "GROUPFEQ_OUT")]
    out: Option<PathBuf>,
    /// Cache directory for computed duals
    #[arg(long, env = "GROUPFEQ_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
}

#[derive(Copy, Clone, ValueEnum)]
enum SpecialEq {
    Dalembert,
    LongDalembert,
    Wilson,
    Gen1,
    LongWilson,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a group and print its basic structure
    Group {
        #[command(flatten)]
        common: Common,
    },
    /// Compute the unitary dual: dimensions, types, characters
    Irreps {
        #[command(flatten)]
        common: Common,
    },
    /// Fourier transform self-checks (inversion, Plancherel) on random functions
    Fourier {
        #[command(flatten)]
        common: Common,
    },
    /// Homogeneous solution space dimension: brute force vs prediction
    HomogDim {
        #[command(flatten)]
        common: Common,
    },
    /// Pure solution families per dual class
    Families {
        #[command(flatten)]
        common: Common,
    },
    /// Classify an admissible tuple read from a JSON file
    ClassifyTuple {
        #[command(flatten)]
        common: Common,
        /// Path to the tuple JSON
        #[arg(long)]
        tuple: PathBuf,
    },
    /// Solve one of the special equations
    SolveSpecial {
        #[arg(value_enum)]
        which: SpecialEq,
        #[command(flatten)]
        common: Common,
    },
    /// Run module invariant suites and aggregate pass/fail
    Verify {
        #[command(flatten)]
        common: Common,
        /// Run every module's suite (default behavior; accepted for clarity)
        #[arg(long)]
        all: bool,
    },
}

enum CliError {
    Validation(String),
    Numerical(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
    fn message(&self) -> &str {
        match self {
            CliError::Validation(m) | CliError::Numerical(m) => m,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (common, cmd_name) = match &cli.cmd {
        Cmd::Group { common } => (common, "group"),
        Cmd::Irreps { common } => (common, "irreps"),
        Cmd::Fourier { common } => (common, "fourier"),
        Cmd::HomogDim { common } => (common, "homog-dim"),
        Cmd::Families { common } => (common, "families"),
        Cmd::ClassifyTuple { common, .. } => (common, "classify-tuple"),
        Cmd::SolveSpecial { common, .. } => (common, "solve-special"),
        Cmd::Verify { common, .. } => (common, "verify"),
    };
    if common.tol <= 0.0 {
        eprintln!("error: --tol must be positive");
        return ExitCode::from(2);
    }
    let group = match load_group(&common.group) {
        Ok(g) => g,
        Err(e) => {
            eprintln!("error: {}", e.message());
            return ExitCode::from(e.code());
        }
    };
    let body = run(&cli.cmd, &group, common);
    let (report, status) = match body {
        Ok(v) => (v, 0u8),
        Err(e) => {
            eprintln!("error: {}", e.message());
            (json!({ "error": e.message() }), e.code())
        }
    };
    let envelope = json!({
        "version": env!("CARGO_PKG_VERSION"),
        "command": cmd_name,
        "group": { "name": group.name, "order": group.order() },
        "seed": common.seed,
        "tol": common.tol,
        "report": report,
    });
    let text = serde_json::to_string_pretty(&envelope).unwrap();
    match &common.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text + "\n") {
                eprintln!("error: cannot write report: {e}");
                return ExitCode::from(2);
            }
        }
        None => println!("{text}"),
    }
    ExitCode::from(status)
}

fn load_group(arg: &str) -> Result<FiniteGroup, CliError> {
    let spec = if Path::new(arg).exists() {
        let data = std::fs::read_to_string(arg)
            .map_err(|e| CliError::Validation(format!("cannot read {arg}: {e}")))?;
        GroupSpec::from_json(&data)
            .map_err(|e| CliError::Validation(format!("bad group spec {arg}: {e}")))?
    } else {
        catalog::by_name(arg).ok_or_else(|| {
            CliError::Validation(format!("{arg} is neither a file nor a catalog group"))
        })?
    };
    spec.build()
        .map_err(|e| CliError::Validation(format!("cannot build group: {e}")))
}

/// Derives a named deterministic PRNG stream from the base seed.
fn stream(seed: u64, tag: &str) -> ChaCha8Rng {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update(tag.as_bytes());
    let digest = h.finalize();
    let mut bytes = [0u8; 8];
    bytes.copy_from_slice(&digest[..8]);
    ChaCha8Rng::seed_from_u64(u64::from_le_bytes(bytes))
}

fn dual_for(g: &FiniteGroup, common: &Common) -> Result<UnitaryDual, CliError> {
    let res = match &common.cache_dir {
        Some(dir) => compute_unitary_dual_cached(g, common.seed, dir),
        None => compute_unitary_dual(g, common.seed),
    };
    res.map_err(|e| CliError::Numerical(format!("dual computation failed: {e}")))
}

fn cjson(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn fn_json(f: &GroupFunction) -> Value {
    Value::Array(f.values.iter().map(|&z| cjson(z)).collect())
}

fn run(cmd: &Cmd, g: &FiniteGroup, common: &Common) -> Result<Value, CliError> {
    match cmd {
        Cmd::Group { .. } => Ok(json!({
            "name": g.name,
            "order": g.order(),
            "identity": g.identity(),
            "classes": g.classes(),
            "inverses": g.elements().map(|x| g.inv(x)).collect::<Vec<_>>(),
        })),
        Cmd::Irreps { .. } => {
            let dual = dual_for(g, common)?;
            let mut defect = 0.0f64;
            let irreps: Vec<Value> = dual
                .irreps
                .iter()
                .map(|p| {
                    defect = defect.max(verify_irrep(p, g));
                    json!({
                        "dim": p.dim,
                        "type": format!("{:?}", p.ty),
                        "partner": p.partner,
                        "character_on_classes": p
                            .character_on_classes(g)
                            .iter()
                            .map(|&z| cjson(round_for_report(z)))
                            .collect::<Vec<_>>(),
                    })
                })
                .collect();
            if defect > 1e-6 {
                return Err(CliError::Numerical(format!(
                    "irrep verification defect {defect:.3e}"
                )));
            }
            Ok(json!({
                "irreps": irreps,
                "dual_classes": dual.pairing,
                "max_verify_defect_below": "1e-6",
            }))
        }
        Cmd::Fourier { .. } => {
            let dual = dual_for(g, common)?;
            let mut rng = stream(common.seed, "fourier");
            let n = g.order();
            let mut max_inv = 0.0f64;
            let mut max_plan = 0.0f64;
            for _ in 0..20 {
                let f = GroupFunction {
                    values: random_complex_vector(&mut rng, n).iter().cloned().collect(),
                };
                let coeffs = transform(&f, g, &dual)
                    .map_err(|e| CliError::Numerical(e.to_string()))?;
                let back = inverse_transform(&coeffs, g, &dual)
                    .map_err(|e| CliError::Numerical(e.to_string()))?;
                max_inv = max_inv.max(f.sub(&back).norm());
                max_plan = max_plan.max(plancherel_defect(&f, g, &dual).unwrap_or(f64::NAN));
            }
            if max_inv > 1e-9 || max_plan > 1e-9 {
                return Err(CliError::Numerical(format!(
                    "fourier defects too large: inversion {max_inv:.3e}, plancherel {max_plan:.3e}"
                )));
            }
            Ok(json!({
                "random_functions": 20,
                "max_inversion_error_below": "1e-9",
                "max_plancherel_defect_below": "1e-9",
            }))
        }
        Cmd::HomogDim { .. } => {
            let dual = dual_for(g, common)?;
            let brute = homogeneous_basis_bruteforce(g)
                .map_err(|e| CliError::Validation(e.to_string()))?
                .len();
            let predicted = homogeneous_dimension_predicted(g, &dual);
            let structured = homogeneous_basis_structured(g, &dual).len();
            let matches = brute == predicted && brute == structured;
            if !matches {
                return Err(CliError::Numerical(format!(
                    "dimension mismatch: bruteforce {brute}, predicted {predicted}, structured {structured}"
                )));
            }
            Ok(json!({
                "bruteforce": brute,
                "predicted": predicted,
                "structured": structured,
                "match": matches,
            }))
        }
        Cmd::Families { .. } => {
            let dual = dual_for(g, common)?;
            let fams: Vec<Value> = pure_families(&dual)
                .iter()
                .map(|f| {
                    json!({
                        "dual_class": f.class,
                        "target": f.target.to_string(),
                        "members": f.members,
                        "parameters": f.parameters,
                    })
                })
                .collect();
            Ok(json!({
                "pure_families": fams,
                "homogeneous_dimension": homogeneous_dimension_predicted(g, &dual),
            }))
        }
        Cmd::ClassifyTuple { tuple, .. } => {
            let data = std::fs::read_to_string(tuple).map_err(|e| {
                CliError::Validation(format!("cannot read {}: {e}", tuple.display()))
            })?;
            let tj: TupleJson = serde_json::from_str(&data)
                .map_err(|e| CliError::Validation(format!("bad tuple JSON: {e}")))?;
            let t = tj
                .to_tuple()
                .map_err(|e| CliError::Validation(format!("bad tuple: {e}")))?;
            match classify(&t, common.tol) {
                Ok(desc) => {
                    let mut v = desc.to_json();
                    v["admissible"] = json!(true);
                    Ok(v)
                }
                Err(groupfeq::admissible::AdmissibleError::NotAdmissible { residual }) => {
                    Ok(json!({ "admissible": false, "residual": residual }))
                }
                Err(e) => Err(CliError::Numerical(e.to_string())),
            }
        }
        Cmd::SolveSpecial { which, .. } => solve_special(*which, g, common),
        Cmd::Verify { .. } => verify_all(g, common),
    }
}

/// Rounds tiny float noise away so cached and fresh reports agree bytewise.
fn round_for_report(z: Complex64) -> Complex64 {
    let r = |x: f64| (x * 1e10).round() / 1e10;
    Complex64::new(r(z.re), r(z.im))
}

fn solve_special(
    which: SpecialEq,
    g: &FiniteGroup,
    common: &Common,
) -> Result<Value, CliError> {
    let dual = dual_for(g, common)?;
    match which {
        SpecialEq::Dalembert => {
            let sols = dalembert_solutions(g, &dual);
            let starts = if g.order() <= 16 { 1000 } else { 100 };
            let probe = dalembert_newton_probe(g, &dual, common.seed, starts);
            let items: Vec<Value> = sols
                .iter()
                .map(|s| {
                    json!({
                        "classical": s.classical,
                        "witness": origin_json(&s.witness),
                        "values": fn_json(&GroupFunction {
                            values: s.f.values.iter().map(|&z| round_for_report(z)).collect(),
                        }),
                        "residual_below": "1e-10",
                    })
                })
                .collect();
            for s in &sols {
                if dalembert_residual(&s.f, g) > 1e-10 {
                    return Err(CliError::Numerical("solution fails residual check".into()));
                }
            }
            if probe.converged_unknown > 0 {
                return Err(CliError::Numerical(format!(
                    "completeness probe found {} unknown limits",
                    probe.converged_unknown
                )));
            }
            Ok(json!({
                "solutions": items,
                "count": sols.len(),
                "probe": {
                    "starts": probe.starts,
                    "converged_known": probe.converged_known,
                    "converged_unknown": probe.converged_unknown,
                    "non_converged": probe.non_converged,
                },
            }))
        }
        SpecialEq::LongDalembert => {
            let sols = dalembert_solutions(g, &dual);
            let report = long_dalembert_check(&sols, g)
                .map_err(|e| CliError::Numerical(e.to_string()))?;
            Ok(json!({
                "solutions": sols.len(),
                "all_satisfy_long_equation": true,
                "max_residual_below": "1e-10",
                "residual_count": report.residuals.len(),
            }))
        }
        SpecialEq::Wilson => {
            let fams = wilson_families(g, &dual);
            let mut rng = stream(common.seed, "wilson");
            let mut items = Vec::new();
            for fam in &fams {
                let p = random_complex_matrix(&mut rng, 2, 2);
                let f = fam.f(&p);
                let r = wilson_residual(&f, &fam.g_component, g);
                if r > 1e-10 {
                    return Err(CliError::Numerical(format!(
                        "wilson family residual {r:.3e}"
                    )));
                }
                items.push(json!({
                    "hom": origin_json(&fam.hom.origin),
                    "sampled_residual_below": "1e-10",
                }));
            }
            Ok(json!({ "families": items, "count": fams.len() }))
        }
        SpecialEq::Gen1 => {
            let fams = gen1_families(g, &dual);
            let mut rng = stream(common.seed, "gen1");
            let mut items = Vec::new();
            for fam in &fams {
                let nparams = match fam {
                    Gen1Family::U1Core { .. }
                    | Gen1Family::O2Core { .. }
                    | Gen1Family::SU2Core { .. } => 4,
                    Gen1Family::O1Lattice { characters } => characters.len(),
                };
                let params: Vec<Complex64> = (0..nparams)
                    .map(|_| {
                        Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
                    })
                    .collect();
                let s = gen1_build(fam, &params, g, &dual)
                    .map_err(|e| CliError::Numerical(e.to_string()))?;
                let r = gen1_residual(&s, g);
                if r > 1e-10 {
                    return Err(CliError::Numerical(format!("gen1 residual {r:.3e}")));
                }
                items.push(json!({
                    "family": gen1_json(fam),
                    "sampled_residual_below": "1e-10",
                }));
            }
            Ok(json!({ "families": items, "count": fams.len() }))
        }
        SpecialEq::LongWilson => {
            let fams = long_wilson_families(g, &dual);
            let mut rng = stream(common.seed, "long-wilson");
            let mut items = Vec::new();
            for fam in &fams {
                let params: Vec<Complex64> = match fam {
                    LongWilsonFamily::O2Branch { .. } => vec![Complex64::new(
                        rng.random::<f64>() - 0.5,
                        rng.random::<f64>() - 0.5,
                    )],
                    LongWilsonFamily::SU2Branch { .. } => (0..4)
                        .map(|_| {
                            Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
                        })
                        .collect(),
                };
                let s = long_wilson_build(fam, &params, &dual)
                    .map_err(|e| CliError::Numerical(e.to_string()))?;
                let r = long_wilson_residual(&s, g);
                if r > 1e-10 {
                    return Err(CliError::Numerical(format!("long-wilson residual {r:.3e}")));
                }
                let tag = match fam {
                    LongWilsonFamily::O2Branch { irrep } => json!({"branch": "O(2)", "irrep": irrep}),
                    LongWilsonFamily::SU2Branch { hom } => {
                        json!({"branch": "SU(2)", "hom": origin_json(&hom.origin)})
                    }
                };
                items.push(json!({ "family": tag, "sampled_residual_below": "1e-10" }));
            }
            Ok(json!({ "families": items, "count": fams.len() }))
        }
    }
}

fn origin_json(o: &HomOrigin) -> Value {
    match o {
        HomOrigin::Trivial => json!({"kind": "trivial"}),
        HomOrigin::CharacterPair(i) => json!({"kind": "character-pair", "irrep": i}),
        HomOrigin::QuaternionicIrrep(i) => json!({"kind": "quaternionic-irrep", "irrep": i}),
    }
}

fn gen1_json(f: &Gen1Family) -> Value {
    match f {
        Gen1Family::U1Core { class } => json!({"core": "U(1)", "dual_class": class}),
        Gen1Family::O2Core { irrep } => json!({"core": "O(2)", "irrep": irrep}),
        Gen1Family::SU2Core { irrep } => json!({"core": "SU(2)", "irrep": irrep}),
        Gen1Family::O1Lattice { characters } => {
            json!({"core": "O(1)-lattice", "characters": characters})
        }
    }
}

fn verify_all(g: &FiniteGroup, common: &Common) -> Result<Value, CliError> {
    let dual = dual_for(g, common)?;
    let mut suites: Vec<(&str, bool, String)> = Vec::new();
    let mut rng = stream(common.seed, "verify");

    // group: Cayley table consistency
    {
        let mut ok = true;
        let e = g.identity();
        for x in g.elements() {
            ok &= g.mul(x, g.inv(x)) == e && g.mul(e, x) == x;
        }
        suites.push(("group", ok, "identity and inverses consistent".into()));
    }

    // repr: every irrep verified
    {
        let worst = dual
            .irreps
            .iter()
            .map(|p| verify_irrep(p, g))
            .fold(0.0f64, f64::max);
        suites.push((
            "repr",
            worst < 1e-7,
            format!("max irrep defect {worst:.3e}"),
        ));
    }

    // fourier: inversion + central split on random functions
    {
        let n = g.order();
        let mut worst = 0.0f64;
        for _ in 0..10 {
            let f = GroupFunction {
                values: random_complex_vector(&mut rng, n).iter().cloned().collect(),
            };
            let coeffs = transform(&f, g, &dual).unwrap();
            let back = inverse_transform(&coeffs, g, &dual).unwrap();
            worst = worst.max(f.sub(&back).norm());
            let c = central_part(&f, g, &dual).unwrap();
            // the central part of a central function is itself
            let cc = central_part(&c, g, &dual).unwrap();
            worst = worst.max(c.sub(&cc).norm());
        }
        suites.push((
            "fourier",
            worst < 1e-9,
            format!("max inversion/central defect {worst:.3e}"),
        ));
    }

    // admissible: canonical families are admissible
    {
        use groupfeq::admissible::FamilyDescriptor;
        let pair = |rng: &mut ChaCha8Rng| {
            let a = random_complex_matrix(rng, 2, 2);
            let mut b = random_complex_matrix(rng, 2, 2);
            let shift = (a.trace() - b.trace()) * Complex64::new(0.5, 0.0);
            b[(0, 0)] += shift;
            b[(1, 1)] += shift;
            (a, b)
        };
        let (a1, b1) = pair(&mut rng);
        let (a2, b2) = pair(&mut rng);
        let descriptors = vec![
            FamilyDescriptor::C1 { a: Complex64::new(0.3, -0.2) },
            FamilyDescriptor::R1 { a: Complex64::new(1.0, 0.5), b: Complex64::new(-0.4, 0.0) },
            FamilyDescriptor::TrAB { a: a1.clone(), b: b1.clone() },
            FamilyDescriptor::TrABDagger { a: a1, b: b1 },
            FamilyDescriptor::TqAB { a: a2.clone(), b: b2.clone() },
            FamilyDescriptor::TqABDagger { a: a2, b: b2 },
            FamilyDescriptor::Tuv {
                u: random_complex_vector(&mut rng, 3),
                v: random_complex_vector(&mut rng, 3),
            },
        ];
        let mut ok = true;
        let mut worst = 0.0f64;
        for d in descriptors {
            let t = d.family_tuple().unwrap();
            let (adm, resid) = t.is_admissible(common.tol);
            ok &= adm;
            worst = worst.max(resid);
            if let Ok(back) = classify(&t, common.tol) {
                ok &= back.family_name() == d.family_name();
            } else {
                ok = false;
            }
        }
        suites.push((
            "admissible",
            ok,
            format!("families admissible and classified, max residual {worst:.3e}"),
        ));
    }

    // solver: homogeneous dimension equality and structured basis membership
    {
        let brute = homogeneous_basis_bruteforce(g)
            .map_err(|e| CliError::Validation(e.to_string()))?;
        let structured = homogeneous_basis_structured(g, &dual);
        let predicted = homogeneous_dimension_predicted(g, &dual);
        let mut ok = brute.len() == predicted && structured.len() == predicted;
        let mut worst = 0.0f64;
        for s in &structured {
            ok &= residual(s, g) < 1e-9;
            let v = tuple_to_vector(s);
            let mut proj = groupfeq::linalg::CVec::zeros(v.len());
            for b in &brute {
                let c = b.dotc(&v);
                proj += b * c;
            }
            worst = worst.max((proj - &v).norm() / v.norm().max(1.0));
        }
        ok &= worst < 1e-8;
        // matrix-equation equivalence and decomposition on one structured tuple
        if let Some(s) = structured.first() {
            ok &= matrixeq_residual(s, g, &dual).unwrap_or(f64::NAN) < 1e-8;
            if let Ok(dec) = decompose(s, g, &dual, common.tol) {
                let back = dec.reassemble();
                let d: f64 = s
                    .f1
                    .sub(&back.f1)
                    .norm()
                    .max(s.f2.sub(&back.f2).norm())
                    .max(s.f3.sub(&back.f3).norm())
                    .max(s.f4.sub(&back.f4).norm());
                ok &= d < 1e-9;
            } else {
                ok = false;
            }
        }
        suites.push((
            "solver",
            ok,
            format!(
                "dim {} = predicted {predicted}, max projection defect {worst:.3e}",
                brute.len()
            ),
        ));
    }

    // special: homomorphisms and d'Alembert residuals
    {
        let homs = su2_homomorphisms(g, &dual);
        let mut worst = homs.iter().map(|h| h.defect(g)).fold(0.0f64, f64::max);
        let sols = dalembert_solutions(g, &dual);
        for s in &sols {
            worst = worst.max(dalembert_residual(&s.f, g));
        }
        let long_ok = long_dalembert_check(&sols, g).is_ok();
        suites.push((
            "special",
            worst < 1e-9 && long_ok,
            format!("{} homs, {} d'Alembert solutions, max defect {worst:.3e}", homs.len(), sols.len()),
        ));
    }

    let all_pass = suites.iter().all(|(_, ok, _)| *ok);
    let report = json!({
        "suites": suites
            .iter()
            .map(|(name, ok, detail)| json!({"suite": name, "pass": ok, "detail": detail}))
            .collect::<Vec<_>>(),
        "all_pass": all_pass,
    });
    if !all_pass {
        let failed: Vec<&str> = suites
            .iter()
            .filter(|(_, ok, _)| !ok)
            .map(|(n, _, _)| *n)
            .collect();
        return Err(CliError::Numerical(format!(
            "verification failed in: {}",
            failed.join(", ")
        )));
    }
    Ok(report)
}
