//! JSON representations of states, matrices, and quantizations.
//!
//! Field names and layouts are part of the tool contract:
//! state: `{"n_qubits": int, "dim": int, "amps": [[re, im], ...]}`;
//! matrix: `{"dim": int, "entries": [[[re, im], ...], ...]}` (row-major);
//! quanta: `{"epsilon", "nu", "c", "quanta": [{"id", "b_in", "b_fin",
//! "t_in", "t_fin"}]}` with types spelled `+1|-1|+i|-i`.
//!
//! Writing is canonical (fixed key order, serde_json's shortest exact float
//! form, two-space indentation, trailing newline), so write → read → write is
//! byte-identical.

use serde::{Deserialize, Serialize};

use crate::ampquant::{AmplitudeQuantum, AmplitudeType, Quantization};
use crate::error::{Error, Result};
use crate::operator::OperatorMatrix;
use crate::state::{ComplexAmp, StateVector};

#[derive(Serialize, Deserialize)]
struct StateFile {
    n_qubits: usize,
    dim: usize,
    amps: Vec<[f64; 2]>,
}

#[derive(Serialize, Deserialize)]
struct MatrixFile {
    dim: usize,
    entries: Vec<Vec<[f64; 2]>>,
}

#[derive(Serialize, Deserialize)]
struct QuantumEntry {
    id: u64,
    b_in: usize,
    b_fin: usize,
    t_in: String,
    t_fin: String,
}

#[derive(Serialize, Deserialize)]
struct QuantaFile {
    epsilon: f64,
    nu: u64,
    c: f64,
    n_qubits: usize,
    dim: usize,
    quanta: Vec<QuantumEntry>,
}

fn render<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

pub fn state_to_json(psi: &StateVector) -> String {
    render(&StateFile {
        n_qubits: psi.n_qubits(),
        dim: psi.dim(),
        amps: psi.amps().iter().map(|a| [a.re, a.im]).collect(),
    })
}

pub fn state_from_json(text: &str) -> Result<StateVector> {
    let file: StateFile = serde_json::from_str(text).map_err(|e| Error::Invalid {
        what: "state json",
        why: e.to_string(),
    })?;
    if file.amps.len() != file.dim {
        return Err(Error::Invalid {
            what: "state json",
            why: format!("dim {} disagrees with {} amplitudes", file.dim, file.amps.len()),
        });
    }
    let amps = file
        .amps
        .iter()
        .map(|&[re, im]| ComplexAmp::new(re, im))
        .collect();
    StateVector::new(file.n_qubits, amps)
}

pub fn matrix_to_json(a: &OperatorMatrix) -> String {
    let entries = (0..a.dim())
        .map(|i| (0..a.dim()).map(|j| [a.get(i, j).re, a.get(i, j).im]).collect())
        .collect();
    render(&MatrixFile {
        dim: a.dim(),
        entries,
    })
}

pub fn matrix_from_json(text: &str) -> Result<OperatorMatrix> {
    let file: MatrixFile = serde_json::from_str(text).map_err(|e| Error::Invalid {
        what: "matrix json",
        why: e.to_string(),
    })?;
    if file.entries.len() != file.dim {
        return Err(Error::Invalid {
            what: "matrix json",
            why: format!("dim {} disagrees with {} rows", file.dim, file.entries.len()),
        });
    }
    let mut flat = Vec::with_capacity(file.dim * file.dim);
    for (i, row) in file.entries.iter().enumerate() {
        if row.len() != file.dim {
            return Err(Error::Invalid {
                what: "matrix json",
                why: format!("row {i} has {} entries, expected {}", row.len(), file.dim),
            });
        }
        flat.extend(row.iter().map(|&[re, im]| ComplexAmp::new(re, im)));
    }
    OperatorMatrix::new(file.dim, flat)
}

pub fn quanta_to_json(theta: &Quantization) -> String {
    render(&QuantaFile {
        epsilon: theta.epsilon,
        nu: theta.nu,
        c: theta.c_of_eps,
        n_qubits: theta.n_qubits(),
        dim: theta.dim(),
        quanta: theta
            .quanta
            .iter()
            .map(|q| QuantumEntry {
                id: q.id,
                b_in: q.b_in,
                b_fin: q.b_fin,
                t_in: q.t_in.as_str().to_string(),
                t_fin: q.t_fin.as_str().to_string(),
            })
            .collect(),
    })
}

pub fn quanta_from_json(text: &str) -> Result<Quantization> {
    let file: QuantaFile = serde_json::from_str(text).map_err(|e| Error::Invalid {
        what: "quanta json",
        why: e.to_string(),
    })?;
    if file.nu == 0 {
        return Err(Error::ZeroColumnWeight);
    }
    let size = file.epsilon / file.nu as f64;
    let quanta = file
        .quanta
        .iter()
        .map(|q| {
            Ok(AmplitudeQuantum {
                size,
                id: q.id,
                b_in: q.b_in,
                b_fin: q.b_fin,
                t_in: AmplitudeType::parse(&q.t_in)?,
                t_fin: AmplitudeType::parse(&q.t_fin)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Quantization::from_parts(quanta, file.epsilon, file.nu, file.n_qubits, file.dim)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ampquant::quantize;
    use crate::operator::{chain_h4, sigma_x};

    #[test]
    fn state_roundtrip_is_byte_identical() {
        let psi = StateVector::new(
            2,
            vec![
                ComplexAmp::new(0.1, -0.2),
                ComplexAmp::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
                ComplexAmp::new(0.0, 0.3),
                ComplexAmp::new(-0.5, 0.5),
            ],
        )
        .unwrap();
        let first = state_to_json(&psi);
        let second = state_to_json(&state_from_json(&first).unwrap());
        assert_eq!(first, second);
    }

    #[test]
    fn matrix_roundtrip_is_byte_identical() {
        let first = matrix_to_json(&chain_h4());
        let parsed = matrix_from_json(&first).unwrap();
        assert_eq!(parsed.max_abs_diff(&chain_h4()), 0.0);
        assert_eq!(matrix_to_json(&parsed), first);
    }

    #[test]
    fn quanta_roundtrip_preserves_trajectories() {
        let theta = quantize(&StateVector::basis_state(1, 0), &sigma_x(), 0.5).unwrap();
        let text = quanta_to_json(&theta);
        let parsed = quanta_from_json(&text).unwrap();
        assert_eq!(parsed.quanta, theta.quanta);
        assert_eq!(quanta_to_json(&parsed), text);
    }

    #[test]
    fn schema_field_names_are_fixed() {
        let text = r#"{"n_qubits": 1, "dim": 2, "amps": [[1.0, 0.0], [0.0, 0.0]]}"#;
        let psi = state_from_json(text).unwrap();
        assert_eq!(psi, StateVector::basis_state(1, 0));
        let text = r#"{"dim": 2, "entries": [[[0.0,0.0],[1.0,0.0]],[[1.0,0.0],[0.0,0.0]]]}"#;
        let m = matrix_from_json(text).unwrap();
        assert_eq!(m.max_abs_diff(&sigma_x()), 0.0);
    }

    #[test]
    fn rejects_malformed_files() {
        assert!(state_from_json("{}").is_err());
        assert!(state_from_json(r#"{"n_qubits": 1, "dim": 3, "amps": [[1,0]]}"#).is_err());
        let nan = r#"{"n_qubits": 0, "dim": 1, "amps": [[null, 0.0]]}"#;
        assert!(state_from_json(nan).is_err());
        assert!(matrix_from_json(r#"{"dim": 2, "entries": [[[1,0]]]}"#).is_err());
    }
}
