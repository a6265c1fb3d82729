//! charsum: command-line front door for the character-sum laboratory.
//!
//! Subcommands: `chars` (inventory), `sums` / `max` / `spectrum` (tables as
//! CSV/JSON), `verify` (identity and inequality suites with JSON reports)
//! and `snapshot` (regression baselines). Exit codes: 0 success, 1 hard
//! assertion failure or snapshot regression, 2 usage/config error.

use anyhow::{Context, Result};
use charsum_core::bounds::{self, family};
use charsum_core::characters::{enumerate_characters, CharacterGroup, DirichletCharacter};
use charsum_core::report::{
    compare_snapshots, hash_config, Report, Snapshot, SnapshotOutcome,
};
use charsum_core::spectrum::{spectrum_cesaro, spectrum_maximal};
use charsum_core::sum_engine::{level_counts, max_all_powers, sums_all_powers};
use charsum_core::util::pow_cutoff;
use clap::{Args, Parser, Subcommand};
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "charsum", version, about = "character sum verification laboratory")]
struct Cli {
    /// flat key=value config file; command-line flags override it
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// worker threads (also honors CHARSUM_THREADS)
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List or describe Dirichlet characters
    Chars {
        #[command(subcommand)]
        action: CharsAction,
    },
    /// Short sums S_{chi^ell}(x) for all ell, as CSV
    Sums {
        #[arg(long)]
        modulus: u64,
        /// character index; omit for all characters
        #[arg(long)]
        index: Option<u64>,
        /// absolute cutoff x
        #[arg(long)]
        x: Option<u64>,
        /// cutoff as q^delta
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Maximal sums M(chi^ell) with argmax, as CSV
    Max {
        #[arg(long)]
        modulus: u64,
        #[arg(long)]
        index: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Large-spectrum sets, as JSON rows
    Spectrum {
        #[arg(long)]
        modulus: u64,
        #[arg(long)]
        index: u64,
        #[arg(long, value_parser = ["cesaro", "maximal"])]
        kind: String,
        #[arg(long)]
        epsilon: f64,
        /// cutoff for the cesaro kind (default q)
        #[arg(long)]
        x: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a verification suite and emit its JSON report
    Verify {
        /// suite name; see --list-suites
        suite: Option<String>,
        #[arg(long)]
        list_suites: bool,
        #[command(flatten)]
        opts: SuiteOpts,
        /// write the JSON report here
        #[arg(long)]
        out: Option<PathBuf>,
        /// also write a CSV mirror here
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Capture or compare a suite snapshot
    Snapshot {
        #[arg(value_parser = ["update", "compare"])]
        action: String,
        suite: String,
        /// snapshot file path
        #[arg(long)]
        file: PathBuf,
        #[command(flatten)]
        opts: SuiteOpts,
        /// relative regression tolerance for compare
        #[arg(long, default_value_t = 0.05)]
        tolerance: f64,
    },
}

#[derive(Subcommand)]
enum CharsAction {
    List {
        #[arg(long)]
        modulus: u64,
        #[arg(long)]
        order: Option<u64>,
        #[arg(long)]
        primitive: bool,
    },
    Describe {
        #[arg(long)]
        modulus: u64,
        #[arg(long)]
        index: u64,
    },
}

/// Per-suite knobs; unset values fall back to the config file, then to the
/// suite's documented default.
#[derive(Args, Clone, Default)]
struct SuiteOpts {
    #[arg(long)]
    q_min: Option<u64>,
    #[arg(long)]
    q_max: Option<u64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    tau: Option<f64>,
    /// the sweep constant c1 in the x-policy
    #[arg(long)]
    c1: Option<f64>,
    #[arg(long)]
    x_floor: Option<u64>,
    /// comma-separated K values for et-level
    #[arg(long)]
    k_list: Option<String>,
    #[arg(long)]
    z: Option<u64>,
    #[arg(long)]
    d_min: Option<u64>,
    #[arg(long)]
    x: Option<u64>,
    /// twist window T
    #[arg(long)]
    window: Option<f64>,
    #[arg(long)]
    conductor_cap: Option<u64>,
    /// structure suite kind: cesaro (default) or maximal
    #[arg(long)]
    kind: Option<String>,
    /// truncation M for variance-delta
    #[arg(long)]
    m_trunc: Option<u64>,
}

struct Settings {
    file: BTreeMap<String, String>,
    opts: SuiteOpts,
}

impl Settings {
    fn load(path: &Option<PathBuf>, opts: &SuiteOpts) -> Result<Settings> {
        let mut file = BTreeMap::new();
        if let Some(p) = path {
            let text = std::fs::read_to_string(p)
                .with_context(|| format!("cannot read config {}", p.display()))?;
            for (lineno, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let (k, v) = line
                    .split_once('=')
                    .with_context(|| format!("config line {} is not key=value", lineno + 1))?;
                file.insert(k.trim().to_string(), v.trim().to_string());
            }
        }
        Ok(Settings { file, opts: opts.clone() })
    }

    fn u64_of(&self, key: &str, flag: Option<u64>, default: u64) -> u64 {
        flag.or_else(|| self.file.get(key).and_then(|v| v.parse().ok()))
            .unwrap_or(default)
    }

    fn usize_of(&self, key: &str, flag: Option<usize>, default: usize) -> usize {
        flag.or_else(|| self.file.get(key).and_then(|v| v.parse().ok()))
            .unwrap_or(default)
    }

    fn f64_of(&self, key: &str, flag: Option<f64>, default: f64) -> f64 {
        flag.or_else(|| self.file.get(key).and_then(|v| v.parse().ok()))
            .unwrap_or(default)
    }

    fn str_of(&self, key: &str, flag: &Option<String>, default: &str) -> String {
        flag.clone()
            .or_else(|| self.file.get(key).cloned())
            .unwrap_or_else(|| default.to_string())
    }
}

const SUITES: &[(&str, &str)] = &[
    ("orthogonality", "full-period level counts equal phi(q)/d exactly (orthogonality identity)"),
    ("pair-count", "L2 average of short sums equals the equal-value pair count (exact)"),
    ("passto-pow", "level-set maxima are monotone under passing to powers chi^{d/r} (exact)"),
    ("et-level", "Erdos-Turan level bound with explicit constants 1, 1, 2/3"),
    ("ft-correlation", "mean-zero divisor-function correlations within d(t1)d(t2) (exact)"),
    ("variance-delta", "restricted variance: direct vs GCD-stratified evaluation"),
    ("fourier", "Fourier expansion of |t|^2: truncation against the closed form"),
    ("hmt", "Halasz-Montgomery-Tenenbaum Cesaro bound (report-only ratios)"),
    ("gslog", "logarithmic-sum bound via pretentious distance (report-only ratios)"),
    ("tk", "Turan-Kubilius variance ratios of Omega_{j0} (snapshot band)"),
    ("structure", "large-spectrum stabilization and pretentious structure checks"),
    ("thm1", "short-sum alternative report over a prime family (snapshot)"),
    ("thm2", "level-set paucity report with the z-grid infimum (snapshot)"),
    ("thm4", "maximal-sum alternative report (snapshot)"),
    ("pv", "Polya-Vinogradov sanity M(chi) <= sqrt(q) log q on primitive characters"),
    ("transform", "batched transform vs naive short sums on random draws"),
    ("cor13", "level-set bound keyed to the largest prime factor of d (snapshot)"),
    ("pow2", "2-power-order level-set band M/x <= 1/2 + slack"),
    ("sigma-lower", "Sigma_chi(x) against loglog d over a prime family (snapshot)"),
];

fn run_suite(name: &str, s: &Settings) -> Result<Report> {
    let seed = s.u64_of("seed", s.opts.seed, 1);
    let mut config: Vec<String> = vec![format!("suite={name}"), format!("seed={seed}")];
    let mut push = |k: &str, v: String| config.push(format!("{k}={v}"));
    let rows = match name {
        "orthogonality" => {
            let (lo, hi) = (
                s.u64_of("q_min", s.opts.q_min, 3),
                s.u64_of("q_max", s.opts.q_max, 2000),
            );
            push("q_min", lo.to_string());
            push("q_max", hi.to_string());
            bounds::orthogonality_suite(lo, hi)
        }
        "pair-count" => {
            let n = s.usize_of("samples", s.opts.samples, 100);
            let hi = s.u64_of("q_max", s.opts.q_max, 500);
            push("samples", n.to_string());
            push("q_max", hi.to_string());
            bounds::pair_count_suite(n, hi, seed)
        }
        "passto-pow" => {
            let hi = s.u64_of("q_max", s.opts.q_max, 1000);
            push("q_max", hi.to_string());
            bounds::passto_pow_suite(3, hi, &[0.5, 1.0])
        }
        "et-level" => {
            let hi = s.u64_of("q_max", s.opts.q_max, 5000);
            let ks = parse_k_list(&s.str_of("k_list", &s.opts.k_list, "1,5,20,50"))?;
            push("q_max", hi.to_string());
            push("k_list", ks.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(","));
            bounds::et_level_suite(3, hi, &ks)
        }
        "ft-correlation" => {
            let z = s.u64_of("z", s.opts.z, 30);
            let fam = sampled_family(s, seed, 5);
            push("z", z.to_string());
            push("family", fam_string(&fam));
            bounds::ft_correlation_suite(&fam, 3, z, &[1_000, 100_000])
        }
        "variance-delta" => {
            let n = s.usize_of("samples", s.opts.samples, 200);
            let m = s.u64_of("m_trunc", s.opts.m_trunc, 1000);
            push("samples", n.to_string());
            push("m_trunc", m.to_string());
            bounds::variance_suite(n, m, seed)
        }
        "fourier" => {
            push("grid_v", "10000".into());
            push("point_v", "1000000".into());
            bounds::fourier_suite(10_000, 10_000, 1_000_000)
        }
        "hmt" => {
            let fam = prime_family(s, 100, 400, 2);
            let t = s.f64_of("window", s.opts.window, 10.0);
            push("family", fam_string(&fam));
            push("window", t.to_string());
            bounds::hmt_suite(&fam, 0.6, t)
        }
        "gslog" => {
            let fam = prime_family(s, 100, 400, 2);
            push("family", fam_string(&fam));
            bounds::gslog_suite(&fam, 0.6)
        }
        "tk" => {
            let fam = prime_family(s, 3, 200, 2);
            let x = s.u64_of("x", s.opts.x, 10_000);
            push("family", fam_string(&fam));
            push("x", x.to_string());
            bounds::tk_suite(&fam, x)
        }
        "structure" => {
            let fam = prime_family(s, 31, 200, 4);
            let eps = s.f64_of("epsilon", s.opts.epsilon, 0.3);
            let cap = s.u64_of("conductor_cap", s.opts.conductor_cap, 40);
            let maximal = s.str_of("kind", &s.opts.kind, "cesaro") == "maximal";
            push("family", fam_string(&fam));
            push("epsilon", eps.to_string());
            push("conductor_cap", cap.to_string());
            push("kind", if maximal { "maximal".into() } else { "cesaro".into() });
            bounds::structure_suite(&fam, eps, maximal, cap, 1.0, 100)
        }
        "thm1" => {
            let fam = thm_family(s, 1000, 10_000, 30);
            let tau = s.f64_of("tau", s.opts.tau, 0.1);
            let c1 = s.f64_of("c1", s.opts.c1, 1.0);
            let xf = s.u64_of("x_floor", s.opts.x_floor, 1000);
            push("family", fam_string(&fam));
            push("tau", tau.to_string());
            push("c1", c1.to_string());
            push("x_floor", xf.to_string());
            bounds::thm1_suite(&fam, tau, c1, xf)
        }
        "thm2" => {
            let fam = thm_family(s, 1000, 10_000, 30);
            let c1 = s.f64_of("c1", s.opts.c1, 1.0);
            let xf = s.u64_of("x_floor", s.opts.x_floor, 1000);
            push("family", fam_string(&fam));
            push("c1", c1.to_string());
            push("x_floor", xf.to_string());
            bounds::thm2_suite(&fam, c1, xf)
        }
        "thm4" => {
            let lo = s.u64_of("q_min", s.opts.q_min, 1000);
            let hi = s.u64_of("q_max", s.opts.q_max, 5000).min(5000);
            let dm = s.u64_of("d_min", s.opts.d_min, 30);
            let fam = family::prime_max_order(lo, hi, dm);
            push("family", fam_string(&fam));
            bounds::thm4_suite(&fam)
        }
        "pv" => {
            let hi = s.u64_of("q_max", s.opts.q_max, 3000);
            push("q_max", hi.to_string());
            bounds::pv_suite(hi)
        }
        "transform" => {
            let n = s.usize_of("samples", s.opts.samples, 200);
            let hi = s.u64_of("q_max", s.opts.q_max, 100_000);
            push("samples", n.to_string());
            push("q_max", hi.to_string());
            bounds::transform_naive_suite(n, hi, seed)
        }
        "cor13" => {
            let fam = thm_family(s, 1000, 10_000, 30);
            let c1 = s.f64_of("c1", s.opts.c1, 1.0);
            push("family", fam_string(&fam));
            bounds::cor13_suite(&fam, c1, 1000)
        }
        "pow2" => {
            let lo = s.u64_of("q_min", s.opts.q_min, 1000);
            let hi = s.u64_of("q_max", s.opts.q_max, 10_000);
            let fam = family::prime_pow2_order(lo, hi, 4);
            push("family", fam_string(&fam));
            bounds::thm2_pow2_suite(&fam, 0.1)
        }
        "sigma-lower" => {
            let fam = thm_family(s, 1000, 10_000, 30);
            push("family", fam_string(&fam));
            bounds::sigma_lower_bound_suite(&fam, 0.6)
        }
        other => anyhow::bail!("unknown suite `{other}`; see `charsum verify --list-suites`"),
    };
    Ok(Report::assemble(name, config, rows))
}

fn parse_k_list(text: &str) -> Result<Vec<u64>> {
    let mut ks = text
        .split(',')
        .map(|t| t.trim().parse::<u64>().context("bad K value"))
        .collect::<Result<Vec<_>>>()?;
    ks.sort_unstable();
    ks.dedup();
    anyhow::ensure!(!ks.is_empty() && ks[0] >= 1, "k_list must contain K >= 1");
    Ok(ks)
}

fn prime_family(s: &Settings, lo: u64, hi: u64, d_min: u64) -> Vec<(u64, u64)> {
    let lo = s.u64_of("q_min", s.opts.q_min, lo);
    let hi = s.u64_of("q_max", s.opts.q_max, hi);
    let dm = s.u64_of("d_min", s.opts.d_min, d_min);
    family::prime_max_order(lo, hi, dm)
}

fn thm_family(s: &Settings, lo: u64, hi: u64, d_min: u64) -> Vec<(u64, u64)> {
    prime_family(s, lo, hi, d_min)
}

/// Deterministic small sample of (q, index) pairs over odd primes.
fn sampled_family(s: &Settings, seed: u64, n: usize) -> Vec<(u64, u64)> {
    let lo = s.u64_of("q_min", s.opts.q_min, 31);
    let hi = s.u64_of("q_max", s.opts.q_max, 400);
    family::sampled_prime_chars(lo, hi, n, seed)
}

fn fam_string(fam: &[(u64, u64)]) -> String {
    format!(
        "{}:{}",
        fam.len(),
        fam.iter()
            .take(4)
            .map(|(q, i)| format!("{q}/{i}"))
            .collect::<Vec<_>>()
            .join(",")
    )
}

fn write_or_print(path: &Option<PathBuf>, content: &str) -> Result<()> {
    match path {
        Some(p) => {
            if let Some(dir) = p.parent() {
                std::fs::create_dir_all(dir).ok();
            }
            std::fs::write(p, content).with_context(|| format!("writing {}", p.display()))?;
        }
        None => print!("{content}"),
    }
    Ok(())
}

fn cmd_chars(action: &CharsAction) -> Result<()> {
    match action {
        CharsAction::List { modulus, order, primitive } => {
            let group = CharacterGroup::build(*modulus)
                .map_err(|e| anyhow::anyhow!("bad modulus: {e}"))?;
            println!("q,index,order,conductor,primitive,principal");
            for chi in enumerate_characters(&group, *order, *primitive) {
                println!(
                    "{},{},{},{},{},{}",
                    modulus,
                    chi.index,
                    chi.order,
                    chi.conductor,
                    chi.is_primitive(),
                    chi.is_principal()
                );
            }
        }
        CharsAction::Describe { modulus, index } => {
            let group = CharacterGroup::build(*modulus)
                .map_err(|e| anyhow::anyhow!("bad modulus: {e}"))?;
            anyhow::ensure!(*index < group.phi, "index {index} >= phi(q) = {}", group.phi);
            let chi = DirichletCharacter::by_index(group, *index);
            println!("{}", serde_json::to_string_pretty(&chi.descriptor())?);
        }
    }
    Ok(())
}

fn cmd_sums(modulus: u64, index: Option<u64>, x: Option<u64>, delta: Option<f64>, out: &Option<PathBuf>) -> Result<()> {
    let group = CharacterGroup::build(modulus).map_err(|e| anyhow::anyhow!("bad modulus: {e}"))?;
    let cutoff = match (x, delta) {
        (Some(x), None) => x,
        (None, Some(d)) => pow_cutoff(modulus, d),
        (None, None) => modulus,
        _ => anyhow::bail!("give either --x or --delta, not both"),
    };
    let indices: Vec<u64> = match index {
        Some(i) => vec![i],
        None => (0..group.phi).collect(),
    };
    let mut csv = String::from("q,index,ell,re,im,abs\n");
    for i in indices {
        anyhow::ensure!(i < group.phi, "index {i} >= phi(q)");
        let chi = DirichletCharacter::by_index(group.clone(), i);
        let sums = sums_all_powers(&level_counts(&chi, cutoff));
        for (ell, v) in sums.values.iter().enumerate() {
            csv.push_str(&format!(
                "{modulus},{i},{ell},{},{},{}\n",
                v.re,
                v.im,
                v.norm()
            ));
        }
    }
    write_or_print(out, &csv)
}

fn cmd_max(modulus: u64, index: Option<u64>, out: &Option<PathBuf>) -> Result<()> {
    let group = CharacterGroup::build(modulus).map_err(|e| anyhow::anyhow!("bad modulus: {e}"))?;
    let indices: Vec<u64> = match index {
        Some(i) => vec![i],
        None => (0..group.phi).collect(),
    };
    let mut csv = String::from("q,index,ell,M,argmax_t\n");
    for i in indices {
        anyhow::ensure!(i < group.phi, "index {i} >= phi(q)");
        let chi = DirichletCharacter::by_index(group.clone(), i);
        let table = max_all_powers(&chi, None);
        for ell in 0..table.d as usize {
            csv.push_str(&format!(
                "{modulus},{i},{ell},{},{}\n",
                table.max_abs[ell], table.argmax[ell]
            ));
        }
    }
    write_or_print(out, &csv)
}

fn cmd_spectrum(
    modulus: u64,
    index: u64,
    kind: &str,
    epsilon: f64,
    x: Option<u64>,
    out: &Option<PathBuf>,
) -> Result<()> {
    let group = CharacterGroup::build(modulus).map_err(|e| anyhow::anyhow!("bad modulus: {e}"))?;
    anyhow::ensure!(index < group.phi, "index {index} >= phi(q)");
    let chi = DirichletCharacter::by_index(group, index);
    let (set, stab) = match kind {
        "cesaro" => {
            let cutoff = x.unwrap_or(modulus);
            let sums = sums_all_powers(&level_counts(&chi, cutoff));
            let set = spectrum_cesaro(&sums, epsilon);
            let stab = charsum_core::spectrum::stabilize(&set.members).ok();
            (set, stab)
        }
        "maximal" => {
            let table = max_all_powers(&chi, None);
            let set = spectrum_maximal(&table, epsilon);
            let stab = charsum_core::spectrum::stabilize(&set.members).ok();
            (set, stab)
        }
        _ => anyhow::bail!("kind must be cesaro or maximal"),
    };
    let row = serde_json::json!({
        "q": modulus,
        "index": index,
        "kind": kind,
        "epsilon": epsilon,
        "threshold": set.threshold,
        "members_count": set.member_count(),
        "members": set.members.iter().collect::<Vec<_>>(),
        "m": stab.as_ref().map(|s| s.m),
        "g": stab.as_ref().map(|s| s.g),
        "H_size": stab.as_ref().map(|s| s.h_size),
    });
    write_or_print(out, &format!("{}\n", serde_json::to_string_pretty(&row)?))
}

fn real_main() -> Result<ExitCode> {
    let cli = Cli::parse();
    let threads = cli
        .threads
        .or_else(|| std::env::var("CHARSUM_THREADS").ok().and_then(|v| v.parse().ok()));
    if let Some(t) = threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build_global()
            .ok();
    }
    match &cli.command {
        Command::Chars { action } => {
            cmd_chars(action)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Sums { modulus, index, x, delta, out } => {
            cmd_sums(*modulus, *index, *x, *delta, out)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Max { modulus, index, out } => {
            cmd_max(*modulus, *index, out)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Spectrum { modulus, index, kind, epsilon, x, out } => {
            cmd_spectrum(*modulus, *index, kind, *epsilon, *x, out)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { suite, list_suites, opts, out, csv } => {
            if *list_suites {
                for (name, desc) in SUITES {
                    println!("{name:15} {desc}");
                }
                return Ok(ExitCode::SUCCESS);
            }
            let Some(name) = suite else {
                eprintln!("usage: charsum verify <suite> [flags]; see --list-suites");
                return Ok(ExitCode::from(2));
            };
            if !SUITES.iter().any(|(n, _)| n == name) {
                eprintln!("unknown suite `{name}`; see `charsum verify --list-suites`");
                return Ok(ExitCode::from(2));
            }
            let settings = Settings::load(&cli.config, opts)?;
            let report = run_suite(name, &settings)?;
            eprintln!(
                "suite {}: {} rows, {} failures, max ratio {}",
                report.suite, report.summary.n, report.summary.failures, report.summary.max_ratio
            );
            write_or_print(out, &format!("{}\n", report.to_json()))?;
            if let Some(csv_path) = csv {
                write_or_print(&Some(csv_path.clone()), &report.to_csv())?;
            }
            Ok(if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Snapshot { action, suite, file, opts, tolerance } => {
            if !SUITES.iter().any(|(n, _)| n == suite) {
                eprintln!("unknown suite `{suite}`; see `charsum verify --list-suites`");
                return Ok(ExitCode::from(2));
            }
            let settings = Settings::load(&cli.config, opts)?;
            let report = run_suite(suite, &settings)?;
            let snap = Snapshot::of_report(&report);
            match action.as_str() {
                "update" => {
                    write_or_print(&Some(file.clone()), &format!("{}\n", snap.to_json()))?;
                    eprintln!("snapshot written: {} rows", snap.ratios.len());
                    Ok(ExitCode::SUCCESS)
                }
                "compare" => {
                    let text = match std::fs::read_to_string(file) {
                        Ok(t) => t,
                        Err(e) => {
                            eprintln!("missing snapshot {}: {e}", file.display());
                            return Ok(ExitCode::from(2));
                        }
                    };
                    let old = Snapshot::from_json(&text)?;
                    match compare_snapshots(&old, &snap, *tolerance) {
                        SnapshotOutcome::Match => {
                            eprintln!("snapshot match ({} rows)", snap.ratios.len());
                            Ok(ExitCode::SUCCESS)
                        }
                        SnapshotOutcome::ConfigMismatch => {
                            eprintln!(
                                "config hash mismatch: snapshot {} vs run {}",
                                old.config_hash,
                                hash_config(&report.config)
                            );
                            Ok(ExitCode::from(2))
                        }
                        SnapshotOutcome::RowCountMismatch => {
                            eprintln!("row count changed");
                            Ok(ExitCode::from(1))
                        }
                        SnapshotOutcome::Regressed { index, old, new } => {
                            eprintln!("ratio {index} regressed: {old} -> {new}");
                            Ok(ExitCode::from(1))
                        }
                    }
                }
                _ => unreachable!("clap validates the action"),
            }
        }
    }
}

fn main() -> ExitCode {
    match real_main() {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
