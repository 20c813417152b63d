//! Building a device from the text config format and sweeping it.

use junctionlab::config::parse_config;
use junctionlab::sweep::sweep;

const TEXT: &str = "
# s-wave chain coupled to a Kitaev chain through a weak link
[region.left]
kind = normal_sc
sites = 16
mu = 0.5
t = 1
delta0 = 1

[region.right]
kind = kitaev_tsc
sites = 16
mu = 1.0
t = 1
delta0 = 1

[coupling.link]
a = left.end
b = right.start
strength = 0.6

[sweep]
region = left
n_phi = 32
";

fn main() -> junctionlab::Result<()> {
    let cfg = parse_config(TEXT)?;
    let spec = cfg.spec()?;
    println!("{} sites in {} regions", spec.n_sites(), spec.regions.len());
    let result = sweep(&cfg.sweep_config())?;
    for c in &result.curves {
        println!(
            "branch {} mean {:+.4} spread {:.4}",
            c.branch_id,
            c.mean_energy(),
            c.spread()
        );
    }
    if let Err(e) = parse_config("[device]\nfamily = sc_sc\nsites = 30\nmu = 0.5\nt = 1\ndelta0 = 1\nbogus = 1\n") {
        println!("rejected: {e}");
    }
    Ok(())
}
