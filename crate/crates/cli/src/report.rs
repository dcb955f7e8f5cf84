//! Structured report document. Section order is fixed (meta, validity,
//! spectrum, purity, components, discriminant, holonomy, phases, channel,
//! synthesis, sweep); floats serialize in shortest round-trip form, so
//! identical inputs produce byte-identical reports.

use polarlab_core::Complex;
use polarlab_core::{
    ChannelCoreReport, CharacteristicDecomposition, HolonomyReport, MuellerMatrix, Tolerances,
    ValidityReport, Verdict,
};
use serde::Serialize;

pub type ComplexPair = [f64; 2];
pub type CMat2Json = [[ComplexPair; 2]; 2];
pub type CMat4Json = [[ComplexPair; 4]; 4];
pub type Mat3Json = [[f64; 3]; 3];
pub type Mat4Json = [[f64; 4]; 4];

pub fn complex_json(z: Complex<f64>) -> ComplexPair {
    [z.re, z.im]
}

pub fn cmat2_json(m: &[[Complex<f64>; 2]; 2]) -> CMat2Json {
    [
        [complex_json(m[0][0]), complex_json(m[0][1])],
        [complex_json(m[1][0]), complex_json(m[1][1])],
    ]
}

pub fn cmat4_json(m: &[[Complex<f64>; 4]; 4]) -> CMat4Json {
    let mut out = [[[0.0; 2]; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = complex_json(m[i][j]);
        }
    }
    out
}

#[derive(Serialize)]
pub struct ReportDocument {
    pub meta: Meta,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub validity: Option<ValiditySection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<SpectrumSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub purity: Option<PuritySection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub components: Option<ComponentsSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub discriminant: Option<DiscriminantSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub holonomy: Option<HolonomySection>,
    /// Machine-readable reason when the holonomy section is absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub holonomy_error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phases: Option<Vec<PhaseEntry>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub channel: Option<ChannelSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub synthesis: Option<SynthesisSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSection>,
}

impl ReportDocument {
    pub fn new(meta: Meta) -> Self {
        Self {
            meta,
            validity: None,
            spectrum: None,
            purity: None,
            components: None,
            discriminant: None,
            holonomy: None,
            holonomy_error: None,
            phases: None,
            channel: None,
            synthesis: None,
            sweep: None,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization");
        s.push('\n');
        s
    }

    /// Flat `key,value` table of every scalar leaf, alphabetical by path.
    pub fn to_table(&self) -> String {
        let value = serde_json::to_value(self).expect("report serialization");
        let mut lines = vec!["key,value".to_string()];
        flatten("", &value, &mut lines);
        let mut s = lines.join("\n");
        s.push('\n');
        s
    }
}

fn flatten(prefix: &str, v: &serde_json::Value, out: &mut Vec<String>) {
    match v {
        serde_json::Value::Object(map) => {
            for (k, child) in map {
                let path = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&path, child, out);
            }
        }
        serde_json::Value::Array(items) => {
            for (i, child) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), child, out);
            }
        }
        other => out.push(format!("{prefix},{other}")),
    }
}

#[derive(Serialize)]
pub struct Meta {
    pub tool: &'static str,
    pub version: &'static str,
    pub mode: &'static str,
    pub input: String,
    pub input_sha256: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m00: Option<f64>,
    pub tolerances: TolerancesSection,
}

#[derive(Serialize)]
pub struct TolerancesSection {
    pub spinor_gate: f64,
    pub unitary_gate: f64,
    pub hermiticity_gate: f64,
    pub rotation_gate: f64,
    pub antisymmetry_gate: f64,
    pub eig_off_diagonal: f64,
    pub degenerate_gap: f64,
    pub clamp: f64,
    pub singular: f64,
    pub pi_branch: f64,
    pub coherent_core: f64,
    pub nonregularity: f64,
    pub phase_undefined: f64,
    pub trace_preservation: f64,
    pub completeness_warn: f64,
    pub spectrum_sum_gate: f64,
}

impl From<&Tolerances<f64>> for TolerancesSection {
    fn from(t: &Tolerances<f64>) -> Self {
        Self {
            spinor_gate: t.spinor_gate,
            unitary_gate: t.unitary_gate,
            hermiticity_gate: t.hermiticity_gate,
            rotation_gate: t.rotation_gate,
            antisymmetry_gate: t.antisymmetry_gate,
            eig_off_diagonal: t.eig_off_diagonal,
            degenerate_gap: t.degenerate_gap,
            clamp: t.clamp,
            singular: t.singular,
            pi_branch: t.pi_branch,
            coherent_core: t.coherent_core,
            nonregularity: t.nonregularity,
            phase_undefined: t.phase_undefined,
            trace_preservation: t.trace_preservation,
            completeness_warn: t.completeness_warn,
            spectrum_sum_gate: t.spectrum_sum_gate,
        }
    }
}

#[derive(Serialize)]
pub struct ValiditySection {
    pub verdict: &'static str,
    /// Eigenvalues of the trace-normalized covariance, descending.
    pub covariance_eigenvalues: [f64; 4],
    pub min_eigenvalue: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub clamped_eigenvalues: Option<[f64; 4]>,
}

impl From<&ValidityReport<f64>> for ValiditySection {
    fn from(r: &ValidityReport<f64>) -> Self {
        Self {
            verdict: match r.verdict {
                Verdict::Physical => "PHYSICAL",
                Verdict::NonPhysical => "NONPHYSICAL",
            },
            covariance_eigenvalues: r.eigenvalues,
            min_eigenvalue: r.min_eigenvalue,
            clamped_eigenvalues: r.clamped,
        }
    }
}

#[derive(Serialize)]
pub struct SpectrumSection {
    pub eigenvalues: [f64; 4],
    pub degenerate_gaps: [bool; 3],
    /// Reshaped eigenvector operators, `Tr(J†J) = 2`, dominant first.
    pub components: Vec<CMat2Json>,
    /// Max orthonormality deviation of the eigenbasis.
    pub orthonormality_residual: f64,
}

#[derive(Serialize)]
pub struct PuritySection {
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    /// Expansion weights `(P1, P2-P1, P3-P2, 1-P3)`.
    pub weights: [f64; 4],
}

#[derive(Serialize)]
pub struct ComponentsSection {
    pub pure: Mat4Json,
    pub two_mix: Mat4Json,
    pub three_mix: Mat4Json,
    pub ideal_depolarizer: Mat4Json,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nonpure: Option<Mat4Json>,
    pub reconstruction_residual: f64,
    pub grouping_residual: f64,
}

#[derive(Serialize)]
pub struct DiscriminantSection {
    pub matrix: CMat4Json,
    /// Weight of the grouped mixed layers, `P3 - P1`.
    pub weight: f64,
    pub trace: f64,
    pub max_imaginary: f64,
    pub nonregular: bool,
}

#[derive(Serialize)]
pub struct HolonomySection {
    pub rotation: Mat3Json,
    pub stretch: Mat3Json,
    pub generator: Mat3Json,
    pub axis: [f64; 3],
    pub angle: f64,
    pub pi_branch: bool,
    pub degenerate_polar: bool,
    pub canonical_su2: CMat2Json,
    pub coherent_weight: f64,
    /// `max(|RᵀR - I|, |det R - 1|)` of the rotation factor.
    pub rotation_residual: f64,
    /// `max|exp(G) - R|`.
    pub generator_residual: f64,
}

#[derive(Serialize)]
pub struct PhaseEntry {
    pub probe_bloch: [f64; 3],
    pub probe_spinor: [ComplexPair; 2],
    /// Absent when the visibility modulus is below the phase gate.
    pub geometric_phase: Option<f64>,
    pub visibility_modulus: f64,
    /// Probe given on the command line (as opposed to a default probe).
    pub requested: bool,
}

#[derive(Serialize)]
pub struct ChannelSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kraus_completeness_deviation: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kraus_completeness_warning: Option<String>,
    pub trace_preserving: bool,
    pub tp_deviation: f64,
    pub choi_trace: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub core: Option<ChannelCoreSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub core_error: Option<String>,
}

#[derive(Serialize)]
pub struct ChannelCoreSection {
    pub kraus_dominant: CMat2Json,
    pub tp_core: bool,
    pub dissipative: bool,
    pub unitary_factor: CMat2Json,
    pub hermitian_factor: CMat2Json,
    pub global_phase: f64,
    pub axis: [f64; 3],
    pub angle: f64,
    pub pi_branch: bool,
    pub polar_degenerate: bool,
}

#[derive(Serialize)]
pub struct SynthesisSection {
    pub mueller: Mat4Json,
    pub m00: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    /// Exact ensemble visibilities at the requested probes (the forward
    /// oracle; phase-sensitive in the stored member phases).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub visibility: Option<Vec<VisibilityEntry>>,
}

#[derive(Serialize)]
pub struct VisibilityEntry {
    pub probe_spinor: [ComplexPair; 2],
    pub re: f64,
    pub im: f64,
    pub arg: Option<f64>,
    pub modulus: f64,
}

#[derive(Serialize)]
pub struct SweepSection {
    pub probe_spinor: [ComplexPair; 2],
    pub samples: Vec<SweepRow>,
}

#[derive(Serialize)]
pub struct SweepRow {
    pub param: f64,
    pub re_v: f64,
    pub im_v: f64,
    pub arg_v: f64,
    pub abs_v: f64,
}

pub fn mat4_json(m: &MuellerMatrix<f64>) -> Mat4Json {
    m.0
}

pub fn spectrum_section(d: &CharacteristicDecomposition<f64>) -> SpectrumSection {
    let mut ortho: f64 = 0.0;
    let vectors: Vec<[Complex<f64>; 4]> = d
        .jones
        .iter()
        .map(polarlab_core::coherency::jones_to_eigenvector)
        .collect();
    for (i, vi) in vectors.iter().enumerate() {
        for (j, vj) in vectors.iter().enumerate() {
            let mut dot = Complex::new(0.0, 0.0);
            for k in 0..4 {
                dot += vi[k].conj() * vj[k];
            }
            let expect = if i == j { 1.0 } else { 0.0 };
            ortho = ortho.max((dot - Complex::new(expect, 0.0)).norm());
        }
    }
    SpectrumSection {
        eigenvalues: d.lambdas,
        degenerate_gaps: d.degenerate_gaps,
        components: d.jones.iter().map(|j| cmat2_json(&j.0)).collect(),
        orthonormality_residual: ortho,
    }
}

pub fn purity_section(d: &CharacteristicDecomposition<f64>) -> PuritySection {
    PuritySection {
        p1: d.purity.p1,
        p2: d.purity.p2,
        p3: d.purity.p3,
        weights: d.weights,
    }
}

pub fn components_section(d: &CharacteristicDecomposition<f64>) -> ComponentsSection {
    ComponentsSection {
        pure: mat4_json(&d.pure_component),
        two_mix: mat4_json(&d.two_mix),
        three_mix: mat4_json(&d.three_mix),
        ideal_depolarizer: mat4_json(&d.ideal_depolarizer),
        nonpure: d.nonpure.as_ref().map(mat4_json),
        reconstruction_residual: d.reconstruction_residual(),
        grouping_residual: d.grouping_residual(),
    }
}

pub fn discriminant_section(d: &CharacteristicDecomposition<f64>) -> DiscriminantSection {
    let mut max_imag: f64 = 0.0;
    let mut trace = 0.0;
    for (i, row) in d.discriminant.iter().enumerate() {
        trace += row[i].re;
        for e in row {
            max_imag = max_imag.max(e.im.abs());
        }
    }
    DiscriminantSection {
        matrix: cmat4_json(&d.discriminant),
        weight: d.discriminant_weight,
        trace,
        max_imaginary: max_imag,
        nonregular: d.nonregular,
    }
}

pub fn holonomy_section(r: &HolonomyReport<f64>) -> HolonomySection {
    let exp = polarlab_core::so3_exp(&r.generator).expect("generator is antisymmetric");
    let mut gen_residual: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            gen_residual = gen_residual.max((exp[i][j] - r.rotation[i][j]).abs());
        }
    }
    HolonomySection {
        rotation: r.rotation,
        stretch: r.stretch,
        generator: r.generator,
        axis: r.axis_angle.axis,
        angle: r.axis_angle.angle,
        pi_branch: r.pi_branch,
        degenerate_polar: r.degenerate_polar,
        canonical_su2: cmat2_json(&r.canonical_su2.0),
        coherent_weight: r.coherent_weight,
        rotation_residual: polarlab_core::pauli::rotation_deviation(&r.rotation),
        generator_residual: gen_residual,
    }
}

pub fn channel_core_section(c: &ChannelCoreReport<f64>) -> ChannelCoreSection {
    ChannelCoreSection {
        kraus_dominant: cmat2_json(&c.kraus_dominant.0),
        tp_core: c.tp_core,
        dissipative: c.dissipative,
        unitary_factor: cmat2_json(&c.unitary_factor.0),
        hermitian_factor: cmat2_json(&c.hermitian_factor),
        global_phase: c.global_phase,
        axis: c.generator.axis,
        angle: c.generator.angle,
        pi_branch: c.generator.pi_branch,
        polar_degenerate: c.polar_degenerate,
    }
}
