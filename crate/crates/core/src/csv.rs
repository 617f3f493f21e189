//! CSV emission for wavefunctions and distributions.
//!
//! Fixed schema: a header row, coordinate first, `.` decimal separator,
//! `\n` line endings, numbers in shortest round-trip exponent form so files
//! are byte-reproducible.

use std::io::{self, Write};

use crate::dist::ProbDist;
use crate::error::Representation;
use crate::wavefn::WaveFn1D;

fn coord_name(axis: Representation) -> &'static str {
    match axis {
        Representation::Position => "x",
        Representation::Momentum => "k",
    }
}

/// Columns `x|k, real, imag`.
pub fn write_wavefn<W: Write>(mut w: W, psi: &WaveFn1D) -> io::Result<()> {
    writeln!(w, "{},real,imag", coord_name(psi.representation()))?;
    for (j, a) in psi.amp().iter().enumerate() {
        writeln!(w, "{:e},{:e},{:e}", psi.coord(j), a.re, a.im)?;
    }
    Ok(())
}

/// Columns `x|k, density`.
pub fn write_dist<W: Write>(mut w: W, p: &ProbDist) -> io::Result<()> {
    writeln!(w, "{},density", coord_name(p.axis()))?;
    for (j, v) in p.values().iter().enumerate() {
        writeln!(w, "{:e},{:e}", p.coord(j), v)?;
    }
    Ok(())
}

/// Generic table: one header, equally long columns.
pub fn write_table<W: Write>(mut w: W, header: &[&str], columns: &[&[f64]]) -> io::Result<()> {
    assert_eq!(header.len(), columns.len());
    let rows = columns.first().map_or(0, |c| c.len());
    assert!(columns.iter().all(|c| c.len() == rows), "ragged columns");
    writeln!(w, "{}", header.join(","))?;
    for r in 0..rows {
        let line: Vec<String> = columns.iter().map(|c| format!("{:e}", c[r])).collect();
        writeln!(w, "{}", line.join(","))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid1D;
    use num_complex::Complex64;

    #[test]
    fn wavefn_schema_is_stable() {
        let g = Grid1D::centered(2, 0.5).unwrap();
        let psi = WaveFn1D::from_fn(g, |x| Complex64::new(x, -2.0 * x));
        let mut out = Vec::new();
        write_wavefn(&mut out, &psi).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "x,real,imag\n-5e-1,-5e-1,1e0\n0e0,0e0,-0e0\n"
        );
    }

    #[test]
    fn dist_schema_is_stable() {
        let p = ProbDist::new(vec![0.25, 1.75], -1.0, 1.0, Representation::Momentum).unwrap();
        let mut out = Vec::new();
        write_dist(&mut out, &p).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "k,density\n-1e0,2.5e-1\n0e0,1.75e0\n");
    }
}
