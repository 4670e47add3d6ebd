//! `varinc`: entailment queries, derived logics, Płonka sums and figure
//! reproduction from the command line.
//!
//! Exit status: 0 on success (YES, valid, all claims confirmed), 1 when the
//! answer is negative, 2 on bad input.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use varinc_core::lattice::compare;
use varinc_core::matrix_file::{load_matrix, write_matrix};
use varinc_core::plonka::system_file::{load_system, write_system};
use varinc_core::plonka::{check_partition_function, decompose, decompose_matrix, PartitionMode};
use varinc_core::transforms::{apply_sequence, canonicalize};
use varinc_core::witness::resolve_oracle;
use varinc_core::{
    bundled, parse_formula, parse_formula_list, BaseProfile, FiniteMatrix, Formula, FragmentSpec,
    Logic, MatrixClass, VISequence,
};

const DEFAULT_PI: &str = "and(x, or(x, y))";

#[derive(Parser)]
#[command(
    name = "varinc",
    version,
    about = "Finite-matrix logics and their variable-inclusion companions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide Γ ⊢ φ in a matrix logic or a derived logic.
    Entails {
        /// Matrix file or bundled name (b2, b2_andor, wk, wk_pwk, wk_b3, chain_*); repeatable.
        #[arg(long = "matrix", visible_alias = "base", required = true)]
        matrices: Vec<String>,
        /// Companion sequence over {l, r} applied to the base.
        #[arg(long)]
        seq: Option<String>,
        /// Comma-separated premises.
        #[arg(long, default_value = "")]
        premises: String,
        #[arg(long)]
        conclusion: String,
    },
    /// Canonical form and antitheorem status of a derived logic.
    DeriveInfo {
        #[arg(long = "matrix", visible_alias = "base", required = true)]
        matrices: Vec<String>,
        #[arg(long)]
        seq: String,
        /// Fragment searched for theorems of the base, e.g. "depth=1".
        #[arg(long)]
        fragment: Option<String>,
    },
    /// Płonka sum of a direct-system file, written as a matrix file.
    Sum {
        #[arg(long)]
        system: PathBuf,
        /// Output file; stdout if absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Split a matrix into a direct system along a partition term.
    Decompose {
        #[arg(long)]
        matrix: String,
        #[arg(long, default_value = DEFAULT_PI)]
        pi: String,
        /// Output prefix: writes <out>.dsys and <out>.<index>.mat.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Ignore the designated set and decompose the algebra only.
        #[arg(long)]
        algebraic: bool,
    },
    /// Check the partition-function axioms for a term on a matrix.
    CheckPartition {
        #[arg(long)]
        matrix: String,
        #[arg(long, default_value = DEFAULT_PI)]
        pi: String,
        #[arg(long, value_enum, default_value_t = Mode::Algebraic)]
        mode: Mode,
    },
    /// List every violated direct-system invariant.
    ValidateSystem {
        #[arg(long)]
        system: PathBuf,
    },
    /// Compare two logics on a fragment.
    ///
    /// A side is a sequence word (`-` for the base), two words joined by `&`
    /// for their meet, or `@file.mat` for another matrix logic.
    Compare {
        #[arg(long = "matrix", visible_alias = "base", required = true)]
        matrices: Vec<String>,
        a: String,
        b: String,
        /// Overrides such as "vars=x,y,z;depth=2;premises=3".
        #[arg(long)]
        fragment: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Rebuild one of the lattice figures and check its claims.
    Reproduce {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        figure: u8,
        #[arg(long)]
        fragment: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Write the bundled matrix files into a directory.
    ExportBundled {
        #[arg(long, default_value = ".")]
        dir: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Algebraic,
    L,
    R,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// A matrix from a path, or failing that from the bundled set by file stem.
fn matrix_arg(spec: &str) -> Result<(String, FiniteMatrix)> {
    let path = Path::new(spec);
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| spec.to_string());
    if path.exists() {
        let m = load_matrix(path).with_context(|| format!("loading {}", path.display()))?;
        return Ok((stem, m));
    }
    bundled::by_name(&stem)
        .map(|m| (stem.clone(), m))
        .ok_or_else(|| anyhow!("{spec}: no such file and no bundled matrix `{stem}`"))
}

fn base_logic(specs: &[String]) -> Result<(Logic, Vec<String>)> {
    let mut names = Vec::new();
    let mut matrices = Vec::new();
    for s in specs {
        let (name, m) = matrix_arg(s)?;
        names.push(name);
        matrices.push(m);
    }
    let class = MatrixClass::new(matrices)?;
    Ok((Logic::from_matrices(names.join("+"), class), names))
}

fn sequence(word: &str) -> Result<VISequence> {
    word.parse()
        .with_context(|| format!("`{word}` is not a word over l and r"))
}

fn fragment(overrides: &Option<String>) -> Result<FragmentSpec> {
    let base = FragmentSpec::default_fragment();
    Ok(match overrides {
        Some(text) => base.with_overrides(text)?,
        None => base,
    })
}

fn formula(text: &str, logic: &Logic) -> Result<Formula> {
    parse_formula(text, logic.signature()).with_context(|| format!("parsing `{text}`"))
}

fn run(command: Command) -> Result<bool> {
    match command {
        Command::Entails {
            matrices,
            seq,
            premises,
            conclusion,
        } => {
            let (base, names) = base_logic(&matrices)?;
            let premises = parse_formula_list(&premises, base.signature())
                .with_context(|| format!("parsing premises `{premises}`"))?;
            let conclusion = formula(&conclusion, &base)?;
            let seq = seq
                .as_deref()
                .map(sequence)
                .transpose()?
                .unwrap_or_default();
            if seq.is_empty() {
                let refs: Vec<&Formula> = premises.iter().collect();
                return Ok(match base.root().countermodel(&refs, &conclusion) {
                    None => {
                        println!("YES");
                        true
                    }
                    Some((i, h)) => {
                        let algebra = base.root().matrices()[i].algebra();
                        println!("NO");
                        println!("countermodel in {}: {}", names[i], h.render(algebra));
                        false
                    }
                });
            }
            let logic = apply_sequence(&base, &seq);
            let yes = logic.entails(&premises, &conclusion);
            println!("{}", if yes { "YES" } else { "NO" });
            Ok(yes)
        }

        Command::DeriveInfo {
            matrices,
            seq,
            fragment: overrides,
        } => {
            let (base, _) = base_logic(&matrices)?;
            let spec = fragment(&overrides)?;
            let seq = sequence(&seq)?;
            let profile = BaseProfile::of(&base, &spec)?;
            let canonical = canonicalize(&seq, profile);
            let derived = apply_sequence(&base, &seq);
            let show = |s: &VISequence| {
                if s.is_empty() {
                    "ε".to_string()
                } else {
                    s.to_string()
                }
            };
            println!("base: {}", base.label());
            println!("  antitheorems: {}", base.antitheorem_status());
            println!(
                "  theorems on {spec}: {}",
                if profile.has_theorems {
                    "yes"
                } else {
                    "none found"
                }
            );
            println!("sequence: {}", show(&seq));
            println!("canonical: {}", show(&canonical));
            println!("antitheorems: {}", derived.antitheorem_status());
            Ok(true)
        }

        Command::Sum { system, out } => {
            let sys =
                load_system(&system).with_context(|| format!("loading {}", system.display()))?;
            let violations = sys.validate();
            if !violations.is_empty() {
                for v in &violations {
                    println!("{v}");
                }
                return Ok(false);
            }
            let text = write_matrix(&sys.sum()?);
            match out {
                Some(path) => std::fs::write(&path, text)
                    .with_context(|| format!("writing {}", path.display()))?,
                None => print!("{text}"),
            }
            Ok(true)
        }

        Command::Decompose {
            matrix,
            pi,
            out,
            algebraic,
        } => {
            let (stem, m) = matrix_arg(&matrix)?;
            let pi =
                parse_formula(&pi, m.signature()).with_context(|| format!("parsing `{pi}`"))?;
            let d = if algebraic {
                decompose(m.algebra(), &pi)?
            } else {
                decompose_matrix(&m, &pi)?
            };
            let prefix = out.unwrap_or_else(|| PathBuf::from(&stem));
            let dir = prefix.parent().map(Path::to_path_buf).unwrap_or_default();
            let base_name = prefix
                .file_name()
                .ok_or_else(|| anyhow!("bad output prefix {}", prefix.display()))?
                .to_string_lossy()
                .into_owned();
            let mut files = Vec::new();
            for (i, c) in d.system.components.iter().enumerate() {
                let file = format!("{base_name}.{}.mat", d.system.semilattice.name(i));
                std::fs::write(dir.join(&file), write_matrix(c))
                    .with_context(|| format!("writing {file}"))?;
                files.push(file);
            }
            let text = write_system(&d.system, &files);
            let sys_path = dir.join(format!("{base_name}.dsys"));
            std::fs::write(&sys_path, &text)
                .with_context(|| format!("writing {}", sys_path.display()))?;
            print!("{text}");

            let reloaded = load_system(&sys_path)?;
            let round_trip = reloaded
                .sum()?
                .algebra()
                .find_isomorphism(m.algebra())
                .is_some();
            println!(
                "wrote {} ({} component(s)); sum of the system {} the input",
                sys_path.display(),
                files.len(),
                if round_trip {
                    "is isomorphic to"
                } else {
                    "differs from"
                }
            );
            Ok(round_trip)
        }

        Command::CheckPartition { matrix, pi, mode } => {
            let (stem, m) = matrix_arg(&matrix)?;
            let pi =
                parse_formula(&pi, m.signature()).with_context(|| format!("parsing `{pi}`"))?;
            let oracle = Logic::from_matrices(stem, MatrixClass::single(m.clone()));
            let (mode, oracle) = match mode {
                Mode::Algebraic => (PartitionMode::Algebraic, None),
                Mode::L => (PartitionMode::Left, Some(&oracle)),
                Mode::R => (PartitionMode::Right, Some(&oracle)),
            };
            let report = check_partition_function(m.algebra(), &pi, oracle, mode)?;
            print!("{report}");
            println!("{}", if report.passed() { "PASS" } else { "FAIL" });
            Ok(report.passed())
        }

        Command::ValidateSystem { system } => {
            let sys =
                load_system(&system).with_context(|| format!("loading {}", system.display()))?;
            let violations = sys.validate();
            if violations.is_empty() {
                println!(
                    "valid {} system with {} component(s)",
                    sys.kind,
                    sys.components.len()
                );
            }
            for v in &violations {
                println!("{v}");
            }
            Ok(violations.is_empty())
        }

        Command::Compare {
            matrices,
            a,
            b,
            fragment: overrides,
            json,
        } => {
            let (base, _) = base_logic(&matrices)?;
            let spec = fragment(&overrides)?;
            let side = |s: &str| -> Result<Logic> {
                match s.strip_prefix('@') {
                    Some(file) => {
                        let (name, m) = matrix_arg(file)?;
                        Ok(Logic::from_matrices(name, MatrixClass::single(m)))
                    }
                    None => Ok(resolve_oracle(&base, s)?),
                }
            };
            let (la, lb) = (side(&a)?, side(&b)?);
            if la.signature() != lb.signature() {
                bail!("{a} and {b} have different signatures");
            }
            let verdict = compare(&la, &lb, &spec, &[])?;
            if json {
                println!("{}", serde_json::to_string_pretty(&verdict)?);
            } else {
                print!("{verdict}");
                println!(
                    "({} inferences on {spec}; equality is relative to the fragment)",
                    verdict.checked
                );
            }
            Ok(true)
        }

        Command::Reproduce {
            figure,
            fragment: overrides,
            json,
        } => {
            let spec = fragment(&overrides)?;
            let report = varinc_core::figures::reproduce(figure, &spec)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                print!("{report}");
            }
            Ok(report.passed())
        }

        Command::ExportBundled { dir } => {
            std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
            for (file, text) in bundled::data_files() {
                let path = dir.join(&file);
                std::fs::write(&path, text)
                    .with_context(|| format!("writing {}", path.display()))?;
                println!("{}", path.display());
            }
            Ok(true)
        }
    }
}
