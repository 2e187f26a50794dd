//! CSV payloads for plotting and debugging.

use std::fmt::Write;

use optpred_core::measure::GramMatrix;
use optpred_core::polynomial::ComplexPoly;

/// Points on the uniform plotting grid.
pub const SAMPLE_POINTS: usize = 1001;

/// `x,re,im,abs` on a uniform grid of [`SAMPLE_POINTS`] over `[-1, 1]`.
pub fn poly_samples(p: &ComplexPoly) -> String {
    let mut out = String::from("x,re,im,abs\n");
    let last = (SAMPLE_POINTS - 1) as f64;
    for k in 0..SAMPLE_POINTS {
        let x = -1.0 + 2.0 * k as f64 / last;
        let v = p.eval_real(x);
        writeln!(out, "{x},{},{},{}", v.re, v.im, v.norm()).unwrap();
    }
    out
}

/// One `i,j,re,im` row per entry, row-major.
pub fn gram_entries(g: &GramMatrix) -> String {
    let mut out = String::from("i,j,re,im\n");
    for i in 0..g.size() {
        for j in 0..g.size() {
            let v = g.get(i, j);
            writeln!(out, "{i},{j},{},{}", v.re, v.im).unwrap();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use optpred_core::chebyshev::Degree;
    use optpred_core::measure::{gram, DiscreteMeasure};
    use optpred_core::polynomial::NodeSet;

    #[test]
    fn samples_cover_the_interval() {
        let p = ComplexPoly::chebyshev_t(Degree::new(3).unwrap());
        let csv = poly_samples(&p);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), SAMPLE_POINTS + 1);
        assert_eq!(lines[1], "-1,-1,0,1");
        assert_eq!(lines[SAMPLE_POINTS], "1,1,0,1");
        assert!(lines[501].starts_with("0,"));
    }

    #[test]
    fn gram_rows() {
        let mu = DiscreteMeasure::uniform(NodeSet::new(vec![-1.0, 1.0]).unwrap());
        let csv = gram_entries(&gram(&mu, Degree::new(1).unwrap()));
        assert_eq!(csv, "i,j,re,im\n0,0,1,0\n0,1,0,0\n1,0,0,0\n1,1,1,0\n");
    }
}
