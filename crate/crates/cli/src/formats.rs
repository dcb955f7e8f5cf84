//! Input parsing: Mueller grids (CSV or structured), complex-matrix
//! documents (Jones ensembles, Kraus lists, Choi matrices), probe states,
//! and sweep grids.
//!
//! Structured documents are JSON. Complex scalars are `[re, im]` pairs;
//! matrices are row-major.

use polarlab_core::Complex;
use polarlab_core::{JonesEnsemble, JonesMatrix, JonesSpinor, KrausSet, MuellerMatrix};
use serde_json::Value;

use crate::error::RunError;

type Mat2 = [[Complex<f64>; 2]; 2];

/// Reads a Mueller matrix from a 4x4 whitespace/CSV grid or a structured
/// document with key `mueller` (16 reals, row-major).
pub fn parse_mueller(text: &str) -> Result<MuellerMatrix<f64>, RunError> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        let doc: Value = serde_json::from_str(text)
            .map_err(|e| RunError::parse(format!("invalid JSON: {e}")))?;
        let arr = doc
            .get("mueller")
            .ok_or_else(|| RunError::parse("missing key \"mueller\""))?
            .as_array()
            .ok_or_else(|| RunError::parse("\"mueller\" must be an array"))?;
        if arr.len() != 16 {
            return Err(RunError::parse(format!(
                "\"mueller\" needs 16 values, found {}",
                arr.len()
            )));
        }
        let mut m = [[0.0; 4]; 4];
        for (k, v) in arr.iter().enumerate() {
            let x = finite_number(v)
                .map_err(|e| RunError::parse(format!("\"mueller\" entry {k}: {e}")))?;
            m[k / 4][k % 4] = x;
        }
        return Ok(MuellerMatrix(m));
    }

    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (row_idx, line) in text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .enumerate()
    {
        let mut row = Vec::new();
        for (col_idx, token) in line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .enumerate()
        {
            let x: f64 = token.parse().map_err(|_| {
                RunError::parse(format!(
                    "row {}, column {}: cannot parse '{}' as a real number",
                    row_idx + 1,
                    col_idx + 1,
                    token
                ))
            })?;
            if !x.is_finite() {
                return Err(RunError::parse(format!(
                    "row {}, column {}: non-finite entry",
                    row_idx + 1,
                    col_idx + 1
                )));
            }
            row.push(x);
        }
        rows.push(row);
    }
    let total: usize = rows.iter().map(Vec::len).sum();
    if rows.len() != 4 || rows.iter().any(|r| r.len() != 4) {
        return Err(RunError::parse(format!(
            "expected a 4x4 grid (16 values in 4 rows), found {} values in {} rows",
            total,
            rows.len()
        )));
    }
    let mut m = [[0.0; 4]; 4];
    for (i, row) in rows.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            m[i][j] = x;
        }
    }
    Ok(MuellerMatrix(m))
}

fn finite_number(v: &Value) -> Result<f64, String> {
    let x = v
        .as_f64()
        .ok_or_else(|| format!("expected a number, found {v}"))?;
    if !x.is_finite() {
        return Err("non-finite entry".into());
    }
    Ok(x)
}

/// `[re, im]` pair.
fn complex_scalar(v: &Value, at: &str) -> Result<Complex<f64>, RunError> {
    let pair = v
        .as_array()
        .ok_or_else(|| RunError::parse(format!("{at}: complex entries are [re, im] pairs")))?;
    if pair.len() != 2 {
        return Err(RunError::parse(format!(
            "{at}: complex pair needs exactly 2 values, found {}",
            pair.len()
        )));
    }
    let re = finite_number(&pair[0]).map_err(|e| RunError::parse(format!("{at}: {e}")))?;
    let im = finite_number(&pair[1]).map_err(|e| RunError::parse(format!("{at}: {e}")))?;
    Ok(Complex::new(re, im))
}

/// Row-major complex matrix of the given shape, entries `[re, im]`.
fn complex_matrix(
    v: &Value,
    rows: usize,
    cols: usize,
    at: &str,
) -> Result<Vec<Complex<f64>>, RunError> {
    let outer = v
        .as_array()
        .ok_or_else(|| RunError::parse(format!("{at}: expected a {rows}x{cols} matrix")))?;
    if outer.len() != rows {
        return Err(RunError::parse(format!(
            "{at}: expected {rows} rows, found {}",
            outer.len()
        )));
    }
    let mut out = Vec::with_capacity(rows * cols);
    for (i, row) in outer.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| RunError::parse(format!("{at}: row {i} is not an array")))?;
        if row.len() != cols {
            return Err(RunError::parse(format!(
                "{at}: row {i} needs {cols} entries, found {}",
                row.len()
            )));
        }
        for (j, e) in row.iter().enumerate() {
            out.push(complex_scalar(e, &format!("{at}[{i}][{j}]"))?);
        }
    }
    Ok(out)
}

fn as_mat2(flat: &[Complex<f64>]) -> Mat2 {
    [[flat[0], flat[1]], [flat[2], flat[3]]]
}

/// Parsed channel input: a Kraus list or a raw Choi matrix.
#[derive(Debug)]
pub enum ChannelInput {
    Kraus(KrausSet<f64>),
    Choi([[Complex<f64>; 4]; 4]),
}

/// Reads a structured document carrying `kraus` (list of 2x2) or `choi`
/// (one 4x4, Hermiticity-gated by the caller).
pub fn parse_channel(text: &str) -> Result<ChannelInput, RunError> {
    let doc: Value =
        serde_json::from_str(text).map_err(|e| RunError::parse(format!("invalid JSON: {e}")))?;
    if let Some(list) = doc.get("kraus") {
        let list = list
            .as_array()
            .ok_or_else(|| RunError::parse("\"kraus\" must be a list of 2x2 matrices"))?;
        if list.is_empty() {
            return Err(RunError::parse("\"kraus\" list is empty"));
        }
        let mut ops = Vec::with_capacity(list.len());
        for (k, m) in list.iter().enumerate() {
            let flat = complex_matrix(m, 2, 2, &format!("kraus[{k}]"))?;
            ops.push(as_mat2(&flat));
        }
        return Ok(ChannelInput::Kraus(KrausSet::new(ops)));
    }
    if let Some(m) = doc.get("choi") {
        let flat = complex_matrix(m, 4, 4, "choi")?;
        let mut rho = [[Complex::new(0.0, 0.0); 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                rho[i][j] = flat[4 * i + j];
            }
        }
        return Ok(ChannelInput::Choi(rho));
    }
    Err(RunError::parse(
        "channel documents need a \"kraus\" or \"choi\" key",
    ))
}

/// Reads a structured document with key `jones_ensemble`: a list of
/// `{weight, jones}` members.
pub fn parse_jones_ensemble(text: &str) -> Result<JonesEnsemble<f64>, RunError> {
    let doc: Value =
        serde_json::from_str(text).map_err(|e| RunError::parse(format!("invalid JSON: {e}")))?;
    let list = doc
        .get("jones_ensemble")
        .ok_or_else(|| RunError::parse("missing key \"jones_ensemble\""))?
        .as_array()
        .ok_or_else(|| RunError::parse("\"jones_ensemble\" must be a list"))?;
    let mut members = Vec::with_capacity(list.len());
    for (k, entry) in list.iter().enumerate() {
        let at = format!("jones_ensemble[{k}]");
        let weight = finite_number(
            entry
                .get("weight")
                .ok_or_else(|| RunError::parse(format!("{at}: missing \"weight\"")))?,
        )
        .map_err(|e| RunError::parse(format!("{at}.weight: {e}")))?;
        let jones = entry
            .get("jones")
            .ok_or_else(|| RunError::parse(format!("{at}: missing \"jones\"")))?;
        let flat = complex_matrix(jones, 2, 2, &format!("{at}.jones"))?;
        members.push((weight, JonesMatrix(as_mat2(&flat))));
    }
    JonesEnsemble::new(members).map_err(|e| RunError::parse(format!("invalid ensemble: {e}")))
}

/// Reads a sweep family document with key `retarder_ensemble`: a list of
/// `{weight, axis}` members; member `k` contributes the retarder
/// `exp(-i φ (axis_k·Σ)/2)` at each swept angle φ.
pub fn parse_retarder_family(text: &str) -> Result<Vec<(f64, [f64; 3])>, RunError> {
    let doc: Value =
        serde_json::from_str(text).map_err(|e| RunError::parse(format!("invalid JSON: {e}")))?;
    let list = doc
        .get("retarder_ensemble")
        .ok_or_else(|| RunError::parse("missing key \"retarder_ensemble\""))?
        .as_array()
        .ok_or_else(|| RunError::parse("\"retarder_ensemble\" must be a list"))?;
    if list.is_empty() {
        return Err(RunError::parse("\"retarder_ensemble\" list is empty"));
    }
    let mut members = Vec::with_capacity(list.len());
    let mut total = 0.0;
    for (k, entry) in list.iter().enumerate() {
        let at = format!("retarder_ensemble[{k}]");
        let weight = finite_number(
            entry
                .get("weight")
                .ok_or_else(|| RunError::parse(format!("{at}: missing \"weight\"")))?,
        )
        .map_err(|e| RunError::parse(format!("{at}.weight: {e}")))?;
        if weight <= 0.0 {
            return Err(RunError::parse(format!("{at}: weight must be positive")));
        }
        let axis = entry
            .get("axis")
            .and_then(Value::as_array)
            .ok_or_else(|| RunError::parse(format!("{at}: missing \"axis\" (3 reals)")))?;
        if axis.len() != 3 {
            return Err(RunError::parse(format!(
                "{at}.axis needs 3 components, found {}",
                axis.len()
            )));
        }
        let mut a = [0.0; 3];
        for (i, v) in axis.iter().enumerate() {
            a[i] = finite_number(v).map_err(|e| RunError::parse(format!("{at}.axis[{i}]: {e}")))?;
        }
        if (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt() <= 0.0 {
            return Err(RunError::parse(format!("{at}.axis must be nonzero")));
        }
        total += weight;
        members.push((weight, a));
    }
    if (total - 1.0).abs() > 1e-9 {
        return Err(RunError::parse(format!(
            "retarder weights sum to {total}, expected 1"
        )));
    }
    Ok(members)
}

/// Probe state: three comma-separated reals are a Bloch vector, four are a
/// spinor `re0,im0,re1,im1`. Both are normalized internally.
pub fn parse_probe(text: &str) -> Result<JonesSpinor<f64>, RunError> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| RunError::parse(format!("probe component '{t}' is not a number")))
        })
        .collect::<Result<_, _>>()?;
    match parts.len() {
        3 => {
            let u = polarlab_core::BlochVector([parts[0], parts[1], parts[2]]);
            if u.norm() <= 0.0 {
                return Err(RunError::parse("probe Bloch vector must be nonzero"));
            }
            Ok(polarlab_core::bloch_to_spinor(&u))
        }
        4 => JonesSpinor::normalized(
            Complex::new(parts[0], parts[1]),
            Complex::new(parts[2], parts[3]),
        )
        .map_err(|e| RunError::parse(format!("invalid probe spinor: {e}"))),
        n => Err(RunError::parse(format!(
            "probe needs 3 (Bloch) or 4 (spinor) components, found {n}"
        ))),
    }
}

/// Inclusive linear grid `start:stop:count`.
pub fn parse_grid(text: &str) -> Result<Vec<f64>, RunError> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(RunError::parse("grid must be start:stop:count"));
    }
    let start: f64 = parts[0]
        .parse()
        .map_err(|_| RunError::parse("grid start is not a number"))?;
    let stop: f64 = parts[1]
        .parse()
        .map_err(|_| RunError::parse("grid stop is not a number"))?;
    let count: usize = parts[2]
        .parse()
        .map_err(|_| RunError::parse("grid count is not an integer"))?;
    if count < 1 {
        return Err(RunError::parse("grid count must be at least 1"));
    }
    if !start.is_finite() || !stop.is_finite() {
        return Err(RunError::parse("grid bounds must be finite"));
    }
    if count == 1 {
        return Ok(vec![start]);
    }
    let step = (stop - start) / (count - 1) as f64;
    Ok((0..count).map(|i| start + step * i as f64).collect())
}
