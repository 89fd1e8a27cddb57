// Lattice-point counts N(t) against the CSR value πt².
//
// cargo run --example gauss_circle

use arealpp::theory::{divergence_table, lattice_count_closed, lattice_count_oracle};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for t in [1.0, 2.0, 3.0, 5.0_f64.sqrt(), 10.0] {
        let n = lattice_count_closed(t);
        assert_eq!(n, lattice_count_oracle(t));
        println!("N({t:.4}) = {n}");
    }
    println!(
        "{:>6} {:>6} {:>10} {:>9} {:>9}",
        "t", "N(t)", "pi t^2", "Er(t)", "|Er|/√t"
    );
    for row in divergence_table(12.0, 1.5) {
        println!(
            "{:>6.2} {:>6} {:>10.3} {:>9.3} {:>9.3}",
            row.t, row.n_of_t, row.k_csr, row.error, row.scaled_error
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
