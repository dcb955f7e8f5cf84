//! Command-line analysis of Mueller matrices and qubit channels: validity,
//! purity structure, the rotation generator of the pure core with its
//! interferometric phase, ensemble synthesis, and visibility sweeps.

mod error;
mod formats;
mod report;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sha2::{Digest, Sha256};

use error::RunError;
use formats::ChannelInput;
use polarlab_core::{
    bloch_to_spinor, channel_core_with, characteristic_decompose_with, choi_from_kraus,
    coherent_visibility_with, extract_holonomy_with, hermitian_eig, random_physical_mueller,
    retarder_family, spinor_to_bloch, sweep_visibility, trace_preservation_with,
    validate_mueller_with, BlochVector, ChoiState, Error as CoreError, JonesEnsemble, JonesSpinor,
    MuellerMatrix, Tolerances, Verdict,
};
use report::{Meta, ReportDocument, TolerancesSection};

#[derive(Parser)]
#[command(
    name = "polarlab",
    version,
    about = "Mueller-matrix purity/holonomy analysis and qubit-channel diagnostics",
    after_help = "Exit codes: 0 ok, 1 internal, 2 non-physical input, \
                  3 no coherent core, 4 parse error, 5 phase undefined at a requested probe."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Physicality verdict of a Mueller matrix (covariance positivity).
    Validate(ValidateArgs),
    /// Full characteristic/holonomy analysis of a Mueller matrix.
    AnalyzeMueller(AnalyzeMuellerArgs),
    /// Choi-representation analysis of a qubit channel (Kraus or Choi input).
    AnalyzeChannel(AnalyzeChannelArgs),
    /// Mueller synthesis from a Jones ensemble (or a seeded random matrix).
    Synth(SynthArgs),
    /// Visibility sweep of a parameterized retarder ensemble.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct OutputArgs {
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_parser = ["structured-report", "table"])]
    format: Option<String>,
}

/// Tolerance overrides; defaults are the documented contract values.
#[derive(Args)]
struct TolArgs {
    /// Spinor normalization gate (default 1e-9).
    #[arg(long)]
    tol_spinor: Option<f64>,
    /// Unitarity gate (default 1e-10).
    #[arg(long)]
    tol_unitary: Option<f64>,
    /// Hermiticity gate (default 1e-8).
    #[arg(long)]
    tol_hermiticity: Option<f64>,
    /// Rotation-matrix gate (default 1e-8).
    #[arg(long)]
    tol_rotation: Option<f64>,
    /// Antisymmetry gate (default 1e-10).
    #[arg(long)]
    tol_antisymmetry: Option<f64>,
    /// Eigensolver off-diagonal threshold (default 1e-14).
    #[arg(long)]
    tol_eig_off_diagonal: Option<f64>,
    /// Degenerate eigenvalue gap (default 1e-12).
    #[arg(long)]
    tol_degenerate_gap: Option<f64>,
    /// Covariance eigenvalue clamp window (default 1e-9).
    #[arg(long)]
    tol_clamp: Option<f64>,
    /// Singular-value floor for polar factors (default 1e-10).
    #[arg(long)]
    tol_singular: Option<f64>,
    /// Pi-branch window for rotation angles (default 1e-6).
    #[arg(long)]
    tol_pi_branch: Option<f64>,
    /// Coherent-core gate on P1 (default 1e-9).
    #[arg(long)]
    tol_coherent_core: Option<f64>,
    /// Nonregularity gate on discriminant imaginary parts (default 1e-9).
    #[arg(long)]
    tol_nonregularity: Option<f64>,
    /// Visibility modulus below which the phase is undefined (default 1e-12).
    #[arg(long)]
    tol_phase_undefined: Option<f64>,
    /// Trace-preservation gate (default 1e-9).
    #[arg(long)]
    tol_trace_preservation: Option<f64>,
    /// Kraus completeness warning threshold (default 1e-6).
    #[arg(long)]
    tol_completeness_warn: Option<f64>,
    /// Eigenvalue-sum gate for purity indices (default 1e-9).
    #[arg(long)]
    tol_spectrum_sum: Option<f64>,
}

impl TolArgs {
    fn tolerances(&self) -> Tolerances<f64> {
        let mut t = Tolerances::<f64>::default();
        macro_rules! set {
            ($field:ident, $arg:ident) => {
                if let Some(v) = self.$arg {
                    t.$field = v;
                }
            };
        }
        set!(spinor_gate, tol_spinor);
        set!(unitary_gate, tol_unitary);
        set!(hermiticity_gate, tol_hermiticity);
        set!(rotation_gate, tol_rotation);
        set!(antisymmetry_gate, tol_antisymmetry);
        set!(eig_off_diagonal, tol_eig_off_diagonal);
        set!(degenerate_gap, tol_degenerate_gap);
        set!(clamp, tol_clamp);
        set!(singular, tol_singular);
        set!(pi_branch, tol_pi_branch);
        set!(coherent_core, tol_coherent_core);
        set!(nonregularity, tol_nonregularity);
        set!(phase_undefined, tol_phase_undefined);
        set!(trace_preservation, tol_trace_preservation);
        set!(completeness_warn, tol_completeness_warn);
        set!(spectrum_sum_gate, tol_spectrum_sum);
        t
    }
}

#[derive(Args)]
struct ValidateArgs {
    /// Mueller matrix file (4x4 CSV grid or {"mueller": [...16...]}).
    input: PathBuf,
    #[command(flatten)]
    output: OutputArgs,
    #[command(flatten)]
    tol: TolArgs,
}

#[derive(Args)]
struct AnalyzeMuellerArgs {
    /// Mueller matrix file (4x4 CSV grid or {"mueller": [...16...]}).
    input: PathBuf,
    /// Probe state: `x,y,z` (Bloch) or `re0,im0,re1,im1` (spinor).
    /// Repeatable. Defaults to the three Poincaré axes.
    #[arg(long)]
    probe: Vec<String>,
    #[command(flatten)]
    output: OutputArgs,
    #[command(flatten)]
    tol: TolArgs,
}

#[derive(Args)]
struct AnalyzeChannelArgs {
    /// Channel file ({"kraus": [2x2...]} or {"choi": 4x4}).
    input: PathBuf,
    #[command(flatten)]
    output: OutputArgs,
    #[command(flatten)]
    tol: TolArgs,
}

#[derive(Args)]
struct SynthArgs {
    /// Jones ensemble file ({"jones_ensemble": [{weight, jones}...]}).
    /// Omit when using --seed.
    input: Option<PathBuf>,
    /// Generate a seeded random physical matrix instead of reading a file.
    #[arg(long, conflicts_with = "input")]
    seed: Option<u64>,
    /// Covariance rank (1..=4) of the seeded matrix.
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(usize))]
    rank: usize,
    /// Probe state for the exact ensemble visibility oracle. Repeatable.
    #[arg(long)]
    probe: Vec<String>,
    #[command(flatten)]
    output: OutputArgs,
    #[command(flatten)]
    tol: TolArgs,
}

#[derive(Args)]
struct SweepArgs {
    /// Retarder family file ({"retarder_ensemble": [{weight, axis}...]}).
    input: PathBuf,
    /// Sweep grid `start:stop:count` (inclusive endpoints).
    #[arg(long)]
    grid: String,
    /// Probe state (default spinor 1,0).
    #[arg(long)]
    probe: Option<String>,
    #[command(flatten)]
    output: OutputArgs,
    #[command(flatten)]
    tol: TolArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!(
                "{}",
                serde_json::json!({
                    "error": { "code": e.kind, "exit": e.exit_code, "message": e.message }
                })
            );
            ExitCode::from(e.exit_code)
        }
    }
}

fn run(cli: Cli) -> Result<u8, RunError> {
    match cli.command {
        Command::Validate(args) => validate(args),
        Command::AnalyzeMueller(args) => analyze_mueller(args),
        Command::AnalyzeChannel(args) => analyze_channel(args),
        Command::Synth(args) => synth(args),
        Command::Sweep(args) => sweep(args),
    }
}

fn read_input(path: &PathBuf) -> Result<(String, String), RunError> {
    let bytes =
        fs::read(path).map_err(|e| RunError::io(format!("cannot read {}: {e}", path.display())))?;
    let digest = hex::encode(Sha256::digest(&bytes));
    let text = String::from_utf8(bytes)
        .map_err(|_| RunError::parse(format!("{} is not UTF-8 text", path.display())))?;
    Ok((text, digest))
}

fn emit(doc: &ReportDocument, output: &OutputArgs) -> Result<(), RunError> {
    let rendered = match output.format.as_deref() {
        Some("table") => doc.to_table(),
        _ => doc.to_json(),
    };
    write_out(&rendered, output)
}

fn write_out(rendered: &str, output: &OutputArgs) -> Result<(), RunError> {
    match &output.out {
        Some(path) => fs::write(path, rendered)
            .map_err(|e| RunError::io(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{rendered}");
            Ok(())
        }
    }
}

fn meta(
    mode: &'static str,
    input: String,
    digest: String,
    m00: Option<f64>,
    tol: &Tolerances<f64>,
) -> Meta {
    Meta {
        tool: "polarlab",
        version: env!("CARGO_PKG_VERSION"),
        mode,
        input,
        input_sha256: digest,
        m00,
        tolerances: TolerancesSection::from(tol),
    }
}

fn validate(args: ValidateArgs) -> Result<u8, RunError> {
    let tol = args.tol.tolerances();
    let (text, digest) = read_input(&args.input)?;
    let m = formats::parse_mueller(&text)?;
    let report = validate_mueller_with(&m, &tol);
    let mut doc = ReportDocument::new(meta(
        "validate",
        args.input.display().to_string(),
        digest,
        Some(report.m00),
        &tol,
    ));
    let physical = report.verdict == Verdict::Physical;
    doc.validity = Some((&report).into());
    emit(&doc, &args.output)?;
    Ok(if physical { 0 } else { 2 })
}

/// Probes used when none are requested: the three Poincaré axes.
fn default_probes() -> Vec<JonesSpinor<f64>> {
    [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]
        .iter()
        .map(|u| bloch_to_spinor(&BlochVector(*u)))
        .collect()
}

fn parse_probes(raw: &[String]) -> Result<(Vec<JonesSpinor<f64>>, bool), RunError> {
    if raw.is_empty() {
        return Ok((default_probes(), false));
    }
    let probes = raw
        .iter()
        .map(|p| formats::parse_probe(p))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((probes, true))
}

fn analyze_mueller(args: AnalyzeMuellerArgs) -> Result<u8, RunError> {
    let tol = args.tol.tolerances();
    let (text, digest) = read_input(&args.input)?;
    let m = formats::parse_mueller(&text)?;
    let (probes, requested) = parse_probes(&args.probe)?;

    let validity = validate_mueller_with(&m, &tol);
    let mut doc = ReportDocument::new(meta(
        "analyze-mueller",
        args.input.display().to_string(),
        digest,
        Some(validity.m00),
        &tol,
    ));
    doc.validity = Some((&validity).into());
    if validity.verdict == Verdict::NonPhysical {
        emit(&doc, &args.output)?;
        return Ok(2);
    }

    let decomp = characteristic_decompose_with(&m, &tol)?;
    doc.spectrum = Some(report::spectrum_section(&decomp));
    doc.purity = Some(report::purity_section(&decomp));
    doc.components = Some(report::components_section(&decomp));
    doc.discriminant = Some(report::discriminant_section(&decomp));

    let mut exit: u8 = 0;
    match extract_holonomy_with(&decomp, &tol) {
        Ok(holonomy) => {
            doc.holonomy = Some(report::holonomy_section(&holonomy));
            let mut entries = Vec::with_capacity(probes.len());
            for psi in &probes {
                let bloch = spinor_to_bloch(psi).map_err(RunError::from)?;
                let entry = match coherent_visibility_with(&decomp, &holonomy, psi, &tol) {
                    Ok(sample) => report::PhaseEntry {
                        probe_bloch: sample.probe.0,
                        probe_spinor: [
                            report::complex_json(psi.0[0]),
                            report::complex_json(psi.0[1]),
                        ],
                        geometric_phase: Some(sample.geometric_phase),
                        visibility_modulus: sample.coherent_visibility_modulus,
                        requested,
                    },
                    Err(CoreError::PhaseUndefined { .. }) => {
                        if requested {
                            exit = 5;
                        }
                        report::PhaseEntry {
                            probe_bloch: bloch.0,
                            probe_spinor: [
                                report::complex_json(psi.0[0]),
                                report::complex_json(psi.0[1]),
                            ],
                            geometric_phase: None,
                            visibility_modulus: decomp.purity.p1
                                * decomp.jones[0].expectation(psi).norm(),
                            requested,
                        }
                    }
                    Err(e) => return Err(e.into()),
                };
                entries.push(entry);
            }
            doc.phases = Some(entries);
        }
        Err(CoreError::NoCoherentCore { .. }) => {
            doc.holonomy_error = Some("no-coherent-core".into());
            exit = 3;
        }
        Err(e) => return Err(e.into()),
    }

    emit(&doc, &args.output)?;
    Ok(exit)
}

fn analyze_channel(args: AnalyzeChannelArgs) -> Result<u8, RunError> {
    let tol = args.tol.tolerances();
    let (text, digest) = read_input(&args.input)?;
    let input = formats::parse_channel(&text)?;

    let (state, completeness) = match input {
        ChannelInput::Kraus(ks) => {
            let build = choi_from_kraus(&ks)?;
            (build.state, Some(build.completeness_deviation))
        }
        ChannelInput::Choi(rho) => {
            let state = ChoiState::new_with(rho, &tol).map_err(|e| RunError {
                exit_code: 4,
                kind: "parse",
                message: format!("choi matrix rejected: {e}"),
            })?;
            (state, None)
        }
    };

    let mut doc = ReportDocument::new(meta(
        "analyze-channel",
        args.input.display().to_string(),
        digest,
        None,
        &tol,
    ));
    let (tp, tp_deviation) = trace_preservation_with(&state, &tol);
    let trace = state.trace();

    // display spectrum of the trace-normalized Choi state
    let mut exit: u8 = 0;
    let mut channel_section = report::ChannelSection {
        kraus_completeness_deviation: completeness,
        kraus_completeness_warning: completeness.and_then(|d| {
            (d > tol.completeness_warn)
                .then(|| format!("completeness deviation {d:e}: channel is not trace preserving"))
        }),
        trace_preserving: tp,
        tp_deviation,
        choi_trace: trace,
        core: None,
        core_error: None,
    };

    if trace > 0.0 {
        let normalized = {
            let mut h = state.rho;
            for row in h.iter_mut() {
                for e in row.iter_mut() {
                    *e /= trace;
                }
            }
            h
        };
        let spectrum = hermitian_eig(&normalized).map_err(RunError::from)?;
        let lambdas = spectrum.eigenvalues;
        if lambdas[3] < -tol.clamp {
            doc.validity = Some(report::ValiditySection {
                verdict: "NONPHYSICAL",
                covariance_eigenvalues: lambdas,
                min_eigenvalue: lambdas[3],
                clamped_eigenvalues: None,
            });
            doc.channel = Some(channel_section);
            emit(&doc, &args.output)?;
            return Ok(2);
        }
        doc.validity = Some(report::ValiditySection {
            verdict: "PHYSICAL",
            covariance_eigenvalues: lambdas,
            min_eigenvalue: lambdas[3],
            clamped_eigenvalues: None,
        });

        match channel_core_with(&state, &tol) {
            Ok(core) => {
                doc.spectrum = Some(report::SpectrumSection {
                    eigenvalues: core.lambdas,
                    degenerate_gaps: core.degenerate_gaps,
                    components: vec![report::cmat2_json(&core.kraus_dominant.0)],
                    orthonormality_residual: 0.0,
                });
                doc.purity = Some(report::PuritySection {
                    p1: core.purity.p1,
                    p2: core.purity.p2,
                    p3: core.purity.p3,
                    weights: [
                        core.purity.p1,
                        core.purity.p2 - core.purity.p1,
                        core.purity.p3 - core.purity.p2,
                        1.0 - core.purity.p3,
                    ],
                });
                channel_section.core = Some(report::channel_core_section(&core));
            }
            Err(CoreError::NoCoherentCore { .. }) => {
                // spectrum and purity are still well defined
                let mut clamped = lambdas;
                for e in clamped.iter_mut() {
                    *e = e.max(0.0);
                }
                let sum: f64 = clamped.iter().sum();
                for e in clamped.iter_mut() {
                    *e /= sum;
                }
                doc.spectrum = Some(report::SpectrumSection {
                    eigenvalues: clamped,
                    degenerate_gaps: spectrum.degenerate_gaps,
                    components: vec![],
                    orthonormality_residual: 0.0,
                });
                if let Ok(p) = polarlab_core::characteristic::compute_ipp_with(&clamped, &tol) {
                    doc.purity = Some(report::PuritySection {
                        p1: p.p1,
                        p2: p.p2,
                        p3: p.p3,
                        weights: [p.p1, p.p2 - p.p1, p.p3 - p.p2, 1.0 - p.p3],
                    });
                }
                channel_section.core_error = Some("no-coherent-core".into());
                exit = 3;
            }
            Err(e) => return Err(e.into()),
        }
    } else {
        doc.validity = Some(report::ValiditySection {
            verdict: "NONPHYSICAL",
            covariance_eigenvalues: [0.0; 4],
            min_eigenvalue: f64::NEG_INFINITY,
            clamped_eigenvalues: None,
        });
        exit = 2;
    }

    doc.channel = Some(channel_section);
    emit(&doc, &args.output)?;
    Ok(exit)
}

fn synth(args: SynthArgs) -> Result<u8, RunError> {
    let tol = args.tol.tolerances();
    let (probes, _) = if args.probe.is_empty() {
        (Vec::new(), false)
    } else {
        parse_probes(&args.probe)?
    };

    let (m, ensemble, meta_doc): (MuellerMatrix<f64>, Option<JonesEnsemble<f64>>, Meta) =
        match (&args.input, args.seed) {
            (Some(path), None) => {
                let (text, digest) = read_input(path)?;
                let ens = formats::parse_jones_ensemble(&text)?;
                let m = polarlab_core::ensemble_to_mueller(&ens);
                (
                    m,
                    Some(ens),
                    meta("synth", path.display().to_string(), digest, None, &tol),
                )
            }
            (None, Some(seed)) => {
                if !(1..=4).contains(&args.rank) {
                    return Err(RunError::parse(format!(
                        "--rank must be 1..=4, got {}",
                        args.rank
                    )));
                }
                let m = random_physical_mueller::<f64>(seed, args.rank);
                (
                    m,
                    None,
                    meta("synth", format!("seed:{seed}"), String::new(), None, &tol),
                )
            }
            _ => {
                return Err(RunError::parse(
                    "synth needs either an ensemble file or --seed",
                ))
            }
        };

    let mut doc = ReportDocument::new(meta_doc);
    doc.meta.m00 = Some(m.m00());
    let validity = validate_mueller_with(&m, &tol);
    doc.validity = Some((&validity).into());

    let visibility = ensemble.as_ref().map(|ens| {
        probes
            .iter()
            .map(|psi| {
                let v = polarlab_core::ensemble_visibility(ens, psi);
                report::VisibilityEntry {
                    probe_spinor: [
                        report::complex_json(psi.0[0]),
                        report::complex_json(psi.0[1]),
                    ],
                    re: v.re,
                    im: v.im,
                    arg: (v.norm() > tol.phase_undefined).then(|| v.im.atan2(v.re)),
                    modulus: v.norm(),
                }
            })
            .collect::<Vec<_>>()
    });

    doc.synthesis = Some(report::SynthesisSection {
        mueller: m.0,
        m00: m.m00(),
        seed: args.seed,
        rank: args.seed.map(|_| args.rank),
        visibility: visibility.filter(|v| !v.is_empty()),
    });

    emit(&doc, &args.output)?;
    Ok(0)
}

fn sweep(args: SweepArgs) -> Result<u8, RunError> {
    let tol = args.tol.tolerances();
    let (text, digest) = read_input(&args.input)?;
    let members = formats::parse_retarder_family(&text)?;
    let grid = formats::parse_grid(&args.grid)?;
    let psi = match &args.probe {
        Some(p) => formats::parse_probe(p)?,
        None => JonesSpinor::new(
            polarlab_core::Complex::new(1.0, 0.0),
            polarlab_core::Complex::new(0.0, 0.0),
        )
        .expect("unit spinor"),
    };

    let family = retarder_family(members);
    let curve = sweep_visibility(&family, &grid, &psi);

    match args.output.format.as_deref() {
        Some("structured-report") => {
            let mut doc = ReportDocument::new(meta(
                "sweep",
                args.input.display().to_string(),
                digest,
                None,
                &tol,
            ));
            doc.sweep = Some(report::SweepSection {
                probe_spinor: [
                    report::complex_json(psi.0[0]),
                    report::complex_json(psi.0[1]),
                ],
                samples: curve
                    .samples
                    .iter()
                    .map(|s| report::SweepRow {
                        param: s.parameter,
                        re_v: s.visibility.re,
                        im_v: s.visibility.im,
                        arg_v: s.arg,
                        abs_v: s.modulus,
                    })
                    .collect(),
            });
            emit(&doc, &args.output)?;
        }
        _ => {
            // default: plot-ready CSV
            let mut out = String::from("param,re_v,im_v,arg_v,abs_v\n");
            for s in &curve.samples {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    s.parameter, s.visibility.re, s.visibility.im, s.arg, s.modulus
                ));
            }
            write_out(&out, &args.output)?;
        }
    }
    Ok(0)
}
