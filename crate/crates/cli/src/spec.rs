//! Module-spec files and the series text form.
//!
//! ```text
//! rank 2 over E side pi
//! [0] ; [1]
//! [1] ; u*[1] + O(u^8)
//! ```
//!
//! Entries of a row are separated by `;`. Over `E` a coefficient `[c0,c1,..]`
//! lists polynomial coefficients of an element of `k_K`; over `A` it lists the
//! Teichmüller digits (as element indices of `k_K`) of an element of `O_K`.

use std::sync::Arc;

use ltphi_core::fields::{FieldDesc, FieldElem, FiniteField};
use ltphi_core::localnum::{LocalInt, LocalRing};
use ltphi_core::matrix::Mat;
use ltphi_core::series::{TruncSeries, UNBOUNDED};
use ltphi_core::twotower::Side;

use crate::error::{CliError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Over {
    E,
    A,
}

/// A parsed series: `(exponent, digits)` terms and an optional `O(u^k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesText {
    pub terms: Vec<(i64, Vec<u64>)>,
    pub prec: Option<i64>,
}

impl SeriesText {
    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(e, _)| *e == 0)
    }

    pub fn parse(text: &str, var: &str) -> Result<Self> {
        let bad = |why: &str| CliError::Parse(format!("series '{}': {why}", text.trim()));
        let mut terms = Vec::new();
        let mut prec = None;
        let text = text.trim();
        if text == "0" {
            return Ok(SeriesText { terms, prec });
        }
        for part in text.split('+').map(str::trim) {
            if let Some(inner) = part.strip_prefix("O(").and_then(|t| t.strip_suffix(')')) {
                let k = inner
                    .strip_prefix(var)
                    .and_then(|t| t.strip_prefix('^'))
                    .and_then(|t| t.parse::<i64>().ok())
                    .ok_or_else(|| bad("bad precision term"))?;
                if prec.replace(k).is_some() {
                    return Err(bad("two precision terms"));
                }
                continue;
            }
            let (exp, coeff) = match part.split_once('*') {
                None => (0, part),
                Some((mono, c)) => {
                    let rest = mono.trim().strip_prefix(var).ok_or_else(|| bad("unknown variable"))?;
                    let exp = if rest.is_empty() {
                        1
                    } else {
                        rest.strip_prefix('^').and_then(|t| t.parse::<i64>().ok()).ok_or_else(|| bad("bad exponent"))?
                    };
                    (exp, c.trim())
                }
            };
            let digits = parse_digits(coeff).ok_or_else(|| bad("bad coefficient"))?;
            if terms.iter().any(|(e, _)| *e == exp) {
                return Err(bad("repeated exponent"));
            }
            terms.push((exp, digits));
        }
        if prec.is_some_and(|k| terms.iter().any(|(e, _)| *e >= k)) {
            return Err(bad("term beyond the precision"));
        }
        Ok(SeriesText { terms, prec })
    }

    pub fn to_field_series(&self, k: &Arc<FieldDesc>) -> Result<TruncSeries<FiniteField>> {
        let terms = self
            .terms
            .iter()
            .map(|(e, d)| Ok((*e, field_elem(k, d)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(TruncSeries::from_terms(&FiniteField(k.clone()), terms, self.prec.unwrap_or(UNBOUNDED)))
    }

    /// The constant term over `k`; call only when [`Self::is_constant`].
    pub fn field_constant(&self, k: &Arc<FieldDesc>) -> Result<FieldElem> {
        match self.terms.first() {
            None => Ok(FieldElem::zero(k)),
            Some((_, d)) => field_elem(k, d),
        }
    }

    pub fn local_constant(&self, ring: &LocalRing) -> Result<LocalInt> {
        let residue = ring.desc().residue().clone();
        match self.terms.first() {
            None => Ok(LocalInt::zero(ring.desc())),
            Some((_, d)) => {
                let order = residue.order().expect("residue field bounded");
                if d.len() > ring.desc().precision() as usize || d.iter().any(|&x| x >= order) {
                    return Err(CliError::Parse(format!("digits {d:?} do not fit O_K at this precision")));
                }
                let digits: Vec<FieldElem> = d.iter().map(|&i| FieldElem::from_index(&residue, i)).collect();
                Ok(LocalInt::from_digits(ring.desc(), &digits))
            }
        }
    }
}

fn parse_digits(text: &str) -> Option<Vec<u64>> {
    let inner = text.strip_prefix('[')?.strip_suffix(']')?;
    inner.split(',').map(|t| t.trim().parse::<u64>().ok()).collect()
}

fn field_elem(k: &Arc<FieldDesc>, digits: &[u64]) -> Result<FieldElem> {
    if digits.iter().any(|&d| d >= k.p()) {
        return Err(CliError::Parse(format!("coefficient {digits:?} has a digit >= p")));
    }
    Ok(FieldElem::from_coeffs(k, digits)?)
}

#[derive(Clone, Debug)]
pub struct ModuleSpec {
    pub rank: usize,
    pub over: Over,
    pub side: Side,
    pub rows: Vec<Vec<SeriesText>>,
}

impl ModuleSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| CliError::Parse("empty module spec".into()))?;
        let words: Vec<&str> = header.split_whitespace().collect();
        let bad_header = || CliError::Parse(format!("bad header '{header}'"));
        let ["rank", d, "over", over, "side", side] = words[..] else {
            return Err(bad_header());
        };
        let rank: usize = d.parse().map_err(|_| bad_header())?;
        if rank == 0 {
            return Err(bad_header());
        }
        let over = match over {
            "E" => Over::E,
            "A" => Over::A,
            _ => return Err(bad_header()),
        };
        let side = match side {
            "pi" => Side::Pi,
            "varpi" => Side::Varpi,
            _ => return Err(bad_header()),
        };
        let rows = lines
            .map(|l| l.split(';').map(|e| SeriesText::parse(e, "u")).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        if rows.len() != rank || rows.iter().any(|r| r.len() != rank) {
            return Err(CliError::Parse(format!("expected {rank} rows of {rank} entries")));
        }
        Ok(ModuleSpec { rank, over, side, rows })
    }

    pub fn is_constant(&self) -> bool {
        self.rows.iter().flatten().all(SeriesText::is_constant)
    }

    pub fn field_matrix(&self, k: &Arc<FieldDesc>) -> Result<Mat<FieldElem>> {
        self.require_constant()?;
        self.matrix(|s| s.field_constant(k))
    }

    pub fn series_matrix(&self, k: &Arc<FieldDesc>) -> Result<Mat<TruncSeries<FiniteField>>> {
        self.matrix(|s| s.to_field_series(k))
    }

    pub fn local_matrix(&self, ring: &LocalRing) -> Result<Mat<LocalInt>> {
        self.require_constant()?;
        self.matrix(|s| s.local_constant(ring))
    }

    fn require_constant(&self) -> Result<()> {
        if self.is_constant() {
            Ok(())
        } else {
            Err(CliError::Unsupported("module is not at finite level (non-constant matrix)".into()))
        }
    }

    fn matrix<T: Clone>(&self, mut f: impl FnMut(&SeriesText) -> Result<T>) -> Result<Mat<T>> {
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().map(&mut f).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(Mat::from_rows(rows)?)
    }
}

/// Writes a constant matrix in module-spec row form.
pub fn matrix_rows<T: Clone>(m: &Mat<T>, text: impl Fn(&T) -> String) -> Vec<String> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| text(m.get(i, j))).collect::<Vec<_>>().join(" ; "))
        .collect()
}
