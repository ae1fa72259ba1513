//! JSON file formats and the deterministic writer.
//!
//! Floats are written with 17 significant digits (`{:.16e}`), which
//! round-trips every finite `f64`. Field order follows struct declaration
//! order, so identical values serialize to identical bytes.

use std::io;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::linalg::{CMatrix, HermitianOperator, Projection};
use crate::tolerances::Tolerances;

/// `{"dim": n, "real": [[...]], "imag": [[...]]}`, row-major; `imag` is
/// omitted when every imaginary part is `+0.0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorFile {
    pub dim: usize,
    pub real: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub imag: Option<Vec<Vec<f64>>>,
}

impl OperatorFile {
    pub fn from_matrix(m: &CMatrix) -> Self {
        let n = m.nrows();
        let rows = |f: fn(&Complex64) -> f64| -> Vec<Vec<f64>> {
            (0..n).map(|r| (0..n).map(|c| f(&m[(r, c)])).collect()).collect()
        };
        let imag = rows(|z| z.im);
        let all_positive_zero = imag.iter().flatten().all(|x| x.to_bits() == 0);
        Self { dim: n, real: rows(|z| z.re), imag: (!all_positive_zero).then_some(imag) }
    }

    pub fn from_operator(a: &HermitianOperator) -> Self {
        Self::from_matrix(a.matrix())
    }

    pub fn from_projection(p: &Projection) -> Self {
        Self::from_matrix(p.matrix())
    }

    /// Matrix described by the file, after checking its shape and entries.
    pub fn to_matrix(&self) -> Result<CMatrix, String> {
        let n = self.dim;
        if n == 0 {
            return Err("`dim` must be at least 1".into());
        }
        let check = |name: &str, rows: &[Vec<f64>]| -> Result<(), String> {
            if rows.len() != n {
                return Err(format!("`{name}` has {} rows, expected {n}", rows.len()));
            }
            for (i, row) in rows.iter().enumerate() {
                if row.len() != n {
                    return Err(format!("`{name}` row {i} has {} entries, expected {n}", row.len()));
                }
                if let Some(j) = row.iter().position(|x| !x.is_finite()) {
                    return Err(format!("`{name}`[{i}][{j}] is not finite"));
                }
            }
            Ok(())
        };
        check("real", &self.real)?;
        if let Some(imag) = &self.imag {
            check("imag", imag)?;
        }
        Ok(CMatrix::from_fn(n, n, |r, c| {
            let im = self.imag.as_ref().map_or(0.0, |m| m[r][c]);
            Complex64::new(self.real[r][c], im)
        }))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AtomFile {
    pub value: f64,
    pub projection: OperatorFile,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultFile {
    pub operator: OperatorFile,
    pub atoms: Vec<AtomFile>,
    pub mode_used: String,
    pub grid: Vec<f64>,
    pub tolerances: Tolerances,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasureFile {
    pub set: String,
    pub branch: String,
    pub rank: usize,
    pub projection: OperatorFile,
}

/// Output of `check`: both order verdicts and the residual behind each test.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderFile {
    pub logic_leq: bool,
    pub numeric_leq: bool,
    pub tests_agree: bool,
    pub checks: Vec<crate::oracle::Check>,
}

/// Pretty JSON with fixed-width float formatting.
struct FixedFloat(PrettyFormatter<'static>);

macro_rules! delegate {
    ($($name:ident($($arg:ident: $ty:ty),*);)*) => {
        $(
            fn $name<W: ?Sized + io::Write>(&mut self, w: &mut W $(, $arg: $ty)*) -> io::Result<()> {
                self.0.$name(w $(, $arg)*)
            }
        )*
    };
}

impl Formatter for FixedFloat {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            write!(w, "{value:.16e}")
        } else {
            w.write_all(b"null")
        }
    }

    delegate! {
        begin_array();
        end_array();
        begin_array_value(first: bool);
        end_array_value();
        begin_object();
        end_object();
        begin_object_key(first: bool);
        begin_object_value();
        end_object_value();
    }
}

pub fn to_json_bytes<T: Serialize>(value: &T) -> Vec<u8> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, FixedFloat(PrettyFormatter::with_indent(b"  ")));
    value.serialize(&mut ser).expect("serializing to memory cannot fail");
    out.push(b'\n');
    out
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> io::Result<()> {
    std::fs::write(path, to_json_bytes(value))
}

pub fn read_operator_file(path: &Path) -> Result<OperatorFile, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read: {e}"))?;
    serde_json::from_str(&text).map_err(|e| format!("invalid operator file: {e}"))
}
