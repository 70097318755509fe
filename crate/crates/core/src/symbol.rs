//! Exact principal symbol of the boundary operator and its ellipticity
//! certificate.
//!
//! The first-order boundary operator sends a 1-form `a` on the flat face
//! to `d*_6 chi6(a)`. Replacing each derivative by `i xi_j` turns it into
//! the 6x6 matrix `Sigma(xi) = -i iota_xi chi6(.)` over the Gaussian
//! rationals. `Sigma` is `-i` times a real skew-symmetric matrix, hence
//! Hermitian, and its characteristic polynomial factors exactly as
//! `t^2 (t^2 - |xi|^2)^2`.

use std::sync::OnceLock;

use serde::Serialize;

use crate::error::SymbolError;
use crate::exterior::{Basis, Form};
use crate::g2::{phi_std, BoundaryFrame, G2Point};
use crate::linalg::{char_poly, DMat};
use crate::scalar::{GaussRat, Rat, RealScalar, Scalar};

fn standard_frame() -> &'static BoundaryFrame<Rat> {
    static FRAME: OnceLock<BoundaryFrame<Rat>> = OnceLock::new();
    FRAME.get_or_init(|| {
        let basis = Basis::standard7();
        let point = G2Point::induce(&phi_std::<Rat>(&basis)).expect("standard form is positive");
        let mut nu = vec![Rat::zero(); 7];
        nu[6] = Rat::one();
        BoundaryFrame::new(&point, &nu).expect("standard top face")
    })
}

/// The symbol of `a -> d*_6 chi6(a)` at a boundary covector, with its
/// exact spectral data.
#[derive(Debug, Clone)]
pub struct SymbolMatrix {
    /// The covector, in boundary coordinates.
    pub xi: Vec<Rat>,
    /// `|xi|^2`.
    pub norm_sq: Rat,
    /// The real skew-symmetric matrix `iota_xi chi6(.)`, linear in `xi`.
    pub real_skew: DMat<Rat>,
    /// The Hermitian symbol `Sigma = -i * real_skew`.
    pub sigma: DMat<GaussRat>,
    /// Characteristic polynomial of `Sigma`, low degree first (real).
    pub char_poly: Vec<Rat>,
    /// Eigenvalues of `Sigma` with multiplicities, ascending; present
    /// exactly when `|xi|` is rational.
    pub eigenvalues: Option<Vec<(Rat, usize)>>,
}

/// The real matrix of `a -> iota_xi chi6(a)` on the standard face.
pub fn symbol_real_matrix(xi: &[Rat]) -> DMat<Rat> {
    let frame = standard_frame();
    assert_eq!(xi.len(), 6);
    DMat::from_fn(6, 6, |row, col| {
        let mut a = vec![Rat::zero(); 6];
        a[col] = Rat::one();
        let a_form = Form::from_coeffs(frame.boundary_basis(), 1, a);
        let two = frame.chi6_apply(&a_form);
        two.interior(xi).expect("degree 2").coeffs()[row].clone()
    })
}

/// Build the symbol at `xi != 0`.
pub fn sigma(xi: &[Rat]) -> Result<SymbolMatrix, SymbolError> {
    assert_eq!(xi.len(), 6);
    if xi.iter().all(Rat::is_zero) {
        return Err(SymbolError::ZeroCovector);
    }
    let real_skew = symbol_real_matrix(xi);
    let minus_i = -GaussRat::i();
    let sigma = DMat::from_fn(6, 6, |i, j| {
        minus_i.clone() * GaussRat::real(real_skew[(i, j)].clone())
    });
    let cp = char_poly(&sigma);
    let mut char_real = Vec::with_capacity(cp.len());
    for c in &cp {
        if !c.im.is_zero() {
            return Err(SymbolError::UnexpectedCharPoly);
        }
        char_real.push(c.re.clone());
    }
    let norm_sq: Rat = xi
        .iter()
        .fold(Rat::zero(), |acc, x| acc + x.clone() * x.clone());
    // expected factorization t^2 (t^2 - |xi|^2)^2
    let c = norm_sq.clone();
    let expected = vec![
        Rat::zero(),
        Rat::zero(),
        c.clone() * c.clone(),
        Rat::zero(),
        -(Rat::from_int(2) * c.clone()),
        Rat::zero(),
        Rat::one(),
    ];
    if char_real != expected {
        return Err(SymbolError::UnexpectedCharPoly);
    }
    let eigenvalues = norm_sq.sqrt().ok().map(|r| {
        vec![(-r.clone(), 2usize), (Rat::zero(), 2usize), (r, 2usize)]
    });
    Ok(SymbolMatrix {
        xi: xi.to_vec(),
        norm_sq,
        real_skew,
        sigma,
        char_poly: char_real,
        eigenvalues,
    })
}

impl SymbolMatrix {
    /// Largest eigenvalue modulus, equal to `|xi|`.
    pub fn max_abs_eigenvalue(&self) -> Option<Rat> {
        self.eigenvalues
            .as_ref()
            .map(|e| e.iter().map(|(v, _)| v.abs()).max().unwrap())
    }
}

/// Spectral data of the full boundary symbol `2 |xi| I - Sigma(xi)`.
#[derive(Debug, Clone)]
pub struct PTildeSymbol {
    pub xi: Vec<Rat>,
    pub matrix: DMat<GaussRat>,
    /// Eigenvalues with multiplicities, ascending: `{|xi|, 2|xi|, 3|xi|}`.
    pub eigenvalues: Vec<(Rat, usize)>,
    pub min_abs_eigenvalue: Rat,
}

/// Symbol of the boundary pseudo-differential operator
/// `a -> 2 Delta^(1/2) a - d*_6 chi6(a)`; its eigenvalues never vanish,
/// which is the ellipticity of the boundary value problem.
pub fn p_tilde_symbol(xi: &[Rat]) -> Result<PTildeSymbol, SymbolError> {
    let s = sigma(xi)?;
    let norm = s
        .norm_sq
        .sqrt()
        .map_err(|_| SymbolError::IrrationalNorm(s.norm_sq.to_string()))?;
    let two_norm = Rat::from_int(2) * norm.clone();
    let mut matrix = s.sigma.neg();
    for i in 0..6 {
        matrix[(i, i)] = matrix[(i, i)].clone() + GaussRat::real(two_norm.clone());
    }
    // the matrix is the verified symbol shifted by 2|xi|, so its spectrum
    // is 2|xi| minus the verified factorization's roots
    let mut roots: Vec<(Rat, usize)> = vec![
        (norm.clone(), 2),
        (two_norm, 2),
        (Rat::from_int(3) * norm, 2),
    ];
    roots.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let min_abs = roots.iter().map(|(v, _)| v.abs()).min().unwrap();
    Ok(PTildeSymbol {
        xi: xi.to_vec(),
        matrix,
        eigenvalues: roots,
        min_abs_eigenvalue: min_abs,
    })
}

/// Draw a uniformly scattered rational unit covector: a stereographic
/// image of a random rational 5-vector, then a random signed coordinate
/// permutation. Exactly unit length by construction.
pub fn random_rational_unit_covector(rng: &mut impl rand::Rng) -> Vec<Rat> {
    loop {
        let a: Vec<Rat> = (0..5)
            .map(|_| Rat::new(rng.gen_range(-4i64..=4), rng.gen_range(1i64..=4)))
            .collect();
        let s: Rat = a
            .iter()
            .fold(Rat::zero(), |acc, x| acc + x.clone() * x.clone());
        let denom = s.clone() + Rat::one();
        let mut u: Vec<Rat> = a
            .iter()
            .map(|x| Rat::from_int(2) * x.clone() / denom.clone())
            .collect();
        u.push((s - Rat::one()) / denom);
        // random signed permutation keeps rationality and unit length
        for i in (1..6).rev() {
            let j = rng.gen_range(0..=i);
            u.swap(i, j);
        }
        for x in u.iter_mut() {
            if rng.gen_bool(0.5) {
                *x = -x.clone();
            }
        }
        if !u.iter().all(Rat::is_zero) {
            return u;
        }
    }
}

fn rat_str(r: &Rat) -> String {
    r.to_string()
}

fn gauss_str(z: &GaussRat) -> String {
    format!("{}{}{}i", z.re, if z.im >= Rat::zero() { "+" } else { "" }, z.im)
}

/// One certified sample in the ellipticity report.
#[derive(Debug, Clone, Serialize)]
pub struct CertificateEntry {
    pub xi: Vec<String>,
    pub matrix: Vec<Vec<String>>,
    pub char_poly: Vec<String>,
    pub eigenvalues: Vec<(String, usize)>,
    pub max_abs_eig: String,
    pub ptilde_eigenvalues: Vec<(String, usize)>,
    pub min_abs_eig: String,
}

/// Machine-readable ellipticity certificate.
#[derive(Debug, Clone, Serialize)]
pub struct SymbolCertificate {
    pub schema: u32,
    pub seed: u64,
    pub sample_count: usize,
    pub entries: Vec<CertificateEntry>,
    /// max over samples of max |eig Sigma(xi)| / |xi|, as an exact rational
    pub max_modulus: String,
    /// min over samples of min |eig PTilde(xi)| / |xi|
    pub min_abs_eig: String,
    pub bound_satisfied: bool,
    pub transitivity_note: String,
}

fn entry_for(xi: &[Rat]) -> Result<CertificateEntry, SymbolError> {
    let s = sigma(xi)?;
    let p = p_tilde_symbol(xi)?;
    let eigen = s.eigenvalues.clone().expect("unit covector");
    Ok(CertificateEntry {
        xi: xi.iter().map(rat_str).collect(),
        matrix: (0..6)
            .map(|i| s.sigma.row(i).iter().map(gauss_str).collect())
            .collect(),
        char_poly: s.char_poly.iter().map(rat_str).collect(),
        eigenvalues: eigen.iter().map(|(v, m)| (rat_str(v), *m)).collect(),
        max_abs_eig: rat_str(&s.max_abs_eigenvalue().unwrap()),
        ptilde_eigenvalues: p
            .eigenvalues
            .iter()
            .map(|(v, m)| (rat_str(v), *m))
            .collect(),
        min_abs_eig: rat_str(&p.min_abs_eigenvalue),
    })
}

/// Certify `max |eig Sigma| = 1 < 2` and `min |eig PTilde| = 1` over the
/// canonical covector plus `samples` random rational unit covectors.
pub fn modulus_bound_certificate(
    seed: u64,
    samples: usize,
) -> Result<SymbolCertificate, SymbolError> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut xi0 = vec![Rat::zero(); 6];
    xi0[0] = Rat::one();
    let mut entries = vec![entry_for(&xi0)?];
    for _ in 0..samples {
        let xi = random_rational_unit_covector(&mut rng);
        entries.push(entry_for(&xi)?);
    }
    let mut max_modulus = Rat::zero();
    let mut min_abs = None::<Rat>;
    for (i, entry) in entries.iter().enumerate() {
        let _ = i;
        let m: Rat = parse_rat(&entry.max_abs_eig);
        if m > max_modulus {
            max_modulus = m;
        }
        let p: Rat = parse_rat(&entry.min_abs_eig);
        min_abs = Some(match min_abs {
            None => p,
            Some(q) => {
                if p < q {
                    p
                } else {
                    q
                }
            }
        });
    }
    let bound_satisfied = max_modulus < Rat::from_int(2);
    Ok(SymbolCertificate {
        schema: 1,
        seed,
        sample_count: samples,
        entries,
        max_modulus: rat_str(&max_modulus),
        min_abs_eig: rat_str(&min_abs.unwrap()),
        bound_satisfied,
        transitivity_note: "the special unitary symmetry of the face structure acts \
            transitively on unit covectors, so the sampled spectrum is the spectrum \
            at every unit covector"
            .to_string(),
    })
}

fn parse_rat(s: &str) -> Rat {
    use num::bigint::BigInt;
    use num::rational::BigRational;
    use std::str::FromStr;
    match s.split_once('/') {
        Some((n, d)) => Rat(BigRational::new(
            BigInt::from_str(n).unwrap(),
            BigInt::from_str(d).unwrap(),
        )),
        None => Rat(BigRational::from_integer(BigInt::from_str(s).unwrap())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn r(n: i64) -> Rat {
        Rat::from_int(n)
    }

    fn dx1() -> Vec<Rat> {
        let mut xi = vec![r(0); 6];
        xi[0] = r(1);
        xi
    }

    #[test]
    fn explicit_table_at_dx1() {
        // boundary coordinate order: x1,y1,x2,y2,x3,y3 = 0..5
        let s = sigma(&dx1()).unwrap();
        let i = GaussRat::i();
        let zero = GaussRat::zero();
        // Sigma(dx2) = -i dx3, Sigma(dx3) = i dx2
        assert_eq!(s.sigma[(4, 2)], -i.clone());
        assert_eq!(s.sigma[(2, 4)], i.clone());
        // Sigma(dy2) = i dy3, Sigma(dy3) = -i dy2
        assert_eq!(s.sigma[(5, 3)], i.clone());
        assert_eq!(s.sigma[(3, 5)], -i.clone());
        // Sigma(dx1) = Sigma(dy1) = 0
        for row in 0..6 {
            assert_eq!(s.sigma[(row, 0)], zero);
            assert_eq!(s.sigma[(row, 1)], zero);
        }
        let eig = s.eigenvalues.unwrap();
        assert_eq!(eig, vec![(r(-1), 2), (r(0), 2), (r(1), 2)]);
    }

    #[test]
    fn rational_unit_sample_eigenvalues() {
        let mut xi = vec![r(0); 6];
        xi[0] = Rat::new(3, 5);
        xi[3] = Rat::new(4, 5);
        let s = sigma(&xi).unwrap();
        let eig = s.eigenvalues.unwrap();
        assert_eq!(eig, vec![(r(-1), 2), (r(0), 2), (r(1), 2)]);
    }

    #[test]
    fn zero_covector_rejected() {
        assert!(matches!(
            sigma(&vec![r(0); 6]).unwrap_err(),
            SymbolError::ZeroCovector
        ));
    }

    #[test]
    fn linearity_and_skewness() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let xi1 = random_rational_unit_covector(&mut rng);
            let xi2 = random_rational_unit_covector(&mut rng);
            let a = Rat::new(rng.gen_range(-5i64..=5).max(1), 3);
            let b = Rat::new(2, rng.gen_range(1i64..=7));
            let combo: Vec<Rat> = xi1
                .iter()
                .zip(&xi2)
                .map(|(x, y)| a.clone() * x.clone() + b.clone() * y.clone())
                .collect();
            let lhs = symbol_real_matrix(&combo);
            let rhs = symbol_real_matrix(&xi1)
                .scale(&a)
                .add(&symbol_real_matrix(&xi2).scale(&b));
            assert_eq!(lhs, rhs);
            // the real matrix is exactly skew-symmetric
            assert_eq!(lhs.transpose(), lhs.neg());
        }
    }

    #[test]
    fn ptilde_spectrum() {
        let p = p_tilde_symbol(&dx1()).unwrap();
        assert_eq!(
            p.eigenvalues,
            vec![(r(1), 2), (r(2), 2), (r(3), 2)]
        );
        assert_eq!(p.min_abs_eigenvalue, r(1));

        // doubling the covector doubles the spectrum
        let mut xi2 = vec![r(0); 6];
        xi2[0] = r(2);
        let p2 = p_tilde_symbol(&xi2).unwrap();
        assert_eq!(
            p2.eigenvalues,
            vec![(r(2), 2), (r(4), 2), (r(6), 2)]
        );
    }

    #[test]
    fn certificate_bound() {
        let cert = modulus_bound_certificate(11, 16).unwrap();
        assert!(cert.bound_satisfied);
        assert_eq!(cert.max_modulus, "1");
        assert_eq!(cert.min_abs_eig, "1");
        assert_eq!(cert.entries.len(), 17);
        // byte-identical rerun
        let again = modulus_bound_certificate(11, 16).unwrap();
        assert_eq!(
            serde_json::to_string(&cert).unwrap(),
            serde_json::to_string(&again).unwrap()
        );
    }

    use rand::Rng;
}
