//! Sweeps the projective-plane family over several orders, comparing edge
//! counts with the bound, and prints the incidence table.

use zlab::experiments::{run_sweep, write_csv, SweepConfig};
use zlab::families::extremal_incidence_counts;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = SweepConfig::from_reader(
        r#"{"family":{"name":"projective_plane","q":2},"sizes":[2,3,5,7,11],"u":2,"c":[2,2],"lambda":2,"epsilon":0.05}"#
            .as_bytes(),
    )?;
    let rows = run_sweep(&config)?;
    write_csv(&rows, std::io::stdout())?;
    for row in extremal_incidence_counts(&[2, 3, 5, 7])? {
        println!("q={} points={} incidences={} K22-free={}", row.q, row.points, row.incidences, row.kuu_free);
    }
    Ok(())
}
