use crate::matrix::{qubit_count, MPMatrix};
use crate::precision::MPReal;

/// Renders a density matrix in Dirac notation, e.g.
/// `5.000000e-01|00><00|+5.000000e-01|00><11|+…`.
///
/// Entries smaller than `10^−(digits+4)` in modulus are omitted, and an
/// entry is printed as a plain real number when its imaginary part is below
/// the same threshold. A matrix with no visible entry prints as `0`.
pub fn format_density(rho: &MPMatrix, digits: usize) -> String {
    let prec = rho.precision();
    let bits = qubit_count(rho.rows()).unwrap_or(0);
    let floor = MPReal::parse_with_prec(&format!("1e-{}", digits + 4), prec).expect("valid literal");
    let mut terms = Vec::new();
    for i in 0..rho.rows() {
        for j in 0..rho.cols() {
            let z = &rho[(i, j)];
            if z.abs() < floor {
                continue;
            }
            let coeff = if z.im().abs() < floor {
                z.re().to_sci_string(digits)
            } else {
                z.to_sci_string(digits)
            };
            terms.push(format!("{coeff}|{}><{}|", ket(i, bits), ket(j, bits)));
        }
    }
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join("+")
    }
}

fn ket(index: usize, bits: usize) -> String {
    (0..bits)
        .rev()
        .map(|b| if index >> b & 1 == 1 { '1' } else { '0' })
        .collect()
}
