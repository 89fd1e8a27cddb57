//! Command-line front end. Exit status: 0 success, 2 invalid input,
//! 3 internal invariant violation.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use arealpp::ann::{ann_test, Tail, WindowChoice};
use arealpp::areal::AdjacencyRule;
use arealpp::dgm::{sample_size, ClusterRegionSpec, Dgm, SampleSizeRule, DEFAULT_WEIGHT_RATIO};
use arealpp::harness::{
    render_csv, render_metadata, render_text, run_matrix_threads, MatrixConfig, StructureData,
};
use arealpp::io::{
    fmt_sig6, parse_radii_list, parse_region_arg, parse_structure_arg, read_points_file, theory_csv,
};
use arealpp::ripley::{k_test, mc_envelope, radius_grid, RadiusGrid, DEFAULT_N_SIM};
use arealpp::theory::divergence_table;
use arealpp::{Error, Result};

#[derive(Parser)]
#[command(
    name = "arealpp",
    version,
    about = "Clustering tests for areal data via unit centroids"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario matrix and write CSV and text tables.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Output directory; without it the CSV goes to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
        /// Overrides every scenario's base seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// One-shot ANN ratio test.
    Ann {
        #[arg(long)]
        points: PathBuf,
        /// GeoJSON path or rect:x0,y0,x1,y1
        #[arg(long)]
        region: String,
        #[arg(long, value_enum, default_value = "study")]
        window: WindowArg,
        #[arg(long, value_enum, default_value = "two")]
        tail: TailArg,
    },
    /// One-shot Ripley's K test against a simulated CSR envelope.
    Kest {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        region: String,
        /// Comma-separated radii, or auto:<structure> for the grid rule.
        #[arg(long)]
        radii: String,
        #[arg(long, default_value_t = DEFAULT_N_SIM)]
        nsim: usize,
        #[arg(long, value_enum, default_value = "right")]
        tail: TailArg,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Draw observed units and print their ids and centroids.
    Gen {
        /// grid:R,C,S or file:PATH
        #[arg(long)]
        structure: String,
        #[arg(long, value_enum)]
        dgm: DgmArg,
        /// Integer, tenth or quarter.
        #[arg(long)]
        n: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_enum, default_value = "rook")]
        adjacency: AdjacencyArg,
        /// Comma-separated cluster-region ids (d2).
        #[arg(long)]
        cluster: Option<String>,
        /// File with one cluster-region id per line (d2).
        #[arg(long)]
        cluster_file: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_WEIGHT_RATIO)]
        ratio: f64,
    },
    /// Lattice count versus πt² table.
    Theory {
        #[arg(long)]
        tmax: f64,
        #[arg(long)]
        step: f64,
    },
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum WindowArg {
    Study,
    Bbox,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum TailArg {
    Two,
    Left,
    Right,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum DgmArg {
    D1,
    D2,
    D3,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum AdjacencyArg {
    Rook,
    Queen,
}

impl From<WindowArg> for WindowChoice {
    fn from(w: WindowArg) -> Self {
        match w {
            WindowArg::Study => WindowChoice::Study,
            WindowArg::Bbox => WindowChoice::Bbox,
        }
    }
}

impl From<TailArg> for Tail {
    fn from(t: TailArg) -> Self {
        match t {
            TailArg::Two => Tail::Two,
            TailArg::Left => Tail::Left,
            TailArg::Right => Tail::Right,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_internal() { 3 } else { 2 })
        }
    }
}

fn run(cmd: Command) -> Result<()> {
    match cmd {
        Command::Simulate {
            config,
            out,
            threads,
            seed,
        } => simulate(&config, out.as_deref(), threads, seed),
        Command::Ann {
            points,
            region,
            window,
            tail,
        } => {
            let pts = read_points_file(points)?;
            let region = parse_region_arg(&region)?;
            let r = ann_test(&pts, &region, window.into(), tail.into())?;
            println!("n,area,rho,r_bar_o,r_bar_e,ratio,sigma,z,tail,reject");
            println!(
                "{},{},{},{},{},{},{},{},{},{}",
                r.n,
                fmt_sig6(r.area),
                fmt_sig6(r.rho),
                fmt_sig6(r.r_bar_o),
                fmt_sig6(r.r_bar_e),
                fmt_sig6(r.ratio),
                fmt_sig6(r.sigma),
                fmt_sig6(r.z),
                r.tail.label(),
                r.reject
            );
            Ok(())
        }
        Command::Kest {
            points,
            region,
            radii,
            nsim,
            tail,
            seed,
        } => {
            let tail: Tail = tail.into();
            if tail == Tail::Left {
                return Err(Error::Config("the K test takes --tail two or right".into()));
            }
            let pts = read_points_file(points)?;
            let region = parse_region_arg(&region)?;
            let radii = match radii.strip_prefix("auto:") {
                Some(spec) => radius_grid(&parse_structure_arg(spec, AdjacencyRule::Rook)?)?,
                None => RadiusGrid::new(parse_radii_list(&radii)?)?,
            };
            let env = mc_envelope(pts.len(), &region, &radii, nsim, seed)?;
            let res = k_test(&pts, &region, &env, tail)?;
            println!("radius_index,radius,khat,lhat,q025,q05,q95,q975,lower,upper,reject");
            for (k, &t) in radii.radii().iter().enumerate() {
                println!(
                    "{},{},{},{},{},{},{},{},{},{},{}",
                    k + 1,
                    fmt_sig6(t),
                    fmt_sig6(res.estimate.khat[k]),
                    fmt_sig6(res.estimate.lhat[k]),
                    fmt_sig6(env.q025[k]),
                    fmt_sig6(env.q05[k]),
                    fmt_sig6(env.q95[k]),
                    fmt_sig6(env.q975[k]),
                    fmt_sig6(res.lower[k]),
                    fmt_sig6(res.upper[k]),
                    res.reject[k]
                );
            }
            Ok(())
        }
        Command::Gen {
            structure,
            dgm,
            n,
            seed,
            adjacency,
            cluster,
            cluster_file,
            ratio,
        } => {
            let rule = match adjacency {
                AdjacencyArg::Rook => AdjacencyRule::Rook,
                AdjacencyArg::Queen => AdjacencyRule::Queen,
            };
            let s = parse_structure_arg(&structure, rule)?;
            let n = match n.as_str() {
                "tenth" => sample_size(s.n_units(), SampleSizeRule::Tenth)?,
                "quarter" => sample_size(s.n_units(), SampleSizeRule::Quarter)?,
                other => other.parse().map_err(|_| {
                    Error::Config(format!("--n must be an integer, tenth or quarter, got `{other}`"))
                })?,
            };
            let dgm = match dgm {
                DgmArg::D1 => Dgm::D1,
                DgmArg::D2 => Dgm::D2,
                DgmArg::D3 => Dgm::D3,
            };
            let mut data = StructureData::new("cli", s);
            let ids: Option<Vec<String>> = match (cluster, cluster_file) {
                (Some(list), None) => Some(list.split(',').map(|t| t.trim().to_string()).collect()),
                (None, Some(path)) => Some(
                    std::fs::read_to_string(path)?
                        .lines()
                        .map(str::trim)
                        .filter(|l| !l.is_empty())
                        .map(String::from)
                        .collect(),
                ),
                (None, None) => None,
                _ => return Err(Error::Config("give --cluster or --cluster-file, not both".into())),
            };
            if let Some(ids) = ids {
                data.cluster = Some(ClusterRegionSpec::new(&data.structure, &ids, ratio)?);
            }
            let draw = data.draw(dgm, n, seed)?;
            println!("id,x,y");
            for &i in &draw.indices {
                let u = &data.structure.units()[i];
                let c = u.centroid();
                println!("{},{},{}", u.id(), fmt_sig6(c.x), fmt_sig6(c.y));
            }
            Ok(())
        }
        Command::Theory { tmax, step } => {
            if !(step > 0.0 && step.is_finite() && tmax.is_finite() && tmax >= 0.0) {
                return Err(Error::Domain("need step > 0 and a finite tmax >= 0".into()));
            }
            print!("{}", theory_csv(&divergence_table(tmax, step))?);
            Ok(())
        }
    }
}

fn simulate(config: &Path, out: Option<&Path>, threads: Option<usize>, seed: Option<u64>) -> Result<()> {
    let cfg = MatrixConfig::from_toml(&std::fs::read_to_string(config)?)?;
    let mut scenarios = cfg.scenarios()?;
    if let Some(seed) = seed {
        scenarios.iter_mut().for_each(|s| s.base_seed = seed);
    }
    let base = config.parent().unwrap_or(Path::new("."));
    let structures = cfg.load_structures(base)?;
    let threads = threads.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let reports = run_matrix_threads(&scenarios, &structures, threads)?;
    let csv = render_csv(&reports)?;
    match out {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            std::fs::write(dir.join("rates.csv"), &csv)?;
            std::fs::write(dir.join("tables.txt"), render_text(&reports)?)?;
            std::fs::write(
                dir.join("metadata.json"),
                serde_json::to_string_pretty(&render_metadata(&reports))?,
            )?;
            eprintln!("wrote {} scenarios to {}", reports.len(), dir.display());
        }
        None => print!("{csv}"),
    }
    Ok(())
}
