//! Bulk bands and gap of each region model.

use junctionlab::bulk::bulk_bands;
use junctionlab::{RegionKind, RegionModel};

fn main() -> junctionlab::Result<()> {
    for kind in [RegionKind::NormalSc, RegionKind::KitaevTsc, RegionKind::TscPhaseHopping] {
        for mu in [0.5, 1.0, 1.5, 2.5] {
            let bands = bulk_bands(&RegionModel::new("bulk", kind, mu, 1.0, 1.0, 0.0), 401)?;
            println!("{:<18} mu {mu:<4} gap edge {:.4}", kind.as_str(), bands.gap_edge);
        }
    }
    Ok(())
}
