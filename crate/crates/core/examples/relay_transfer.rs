//! The two-hop transfer protocol on its own: a lossy first hop, a lossy
//! relay hop, periodic reports and the conservation check.
//!
//! cargo run --example relay_transfer

use oppmcn::transfer::{TransferParams, TransferState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> oppmcn::Result<()> {
    let params = TransferParams {
        file_bytes: 200 * 1470,
        ..TransferParams::default()
    };
    let mut st = TransferState::new(params, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let dt = 0.001;
    let mut t = 0.0;
    let mut k = 0u64;
    while !st.is_complete() && t < 60.0 {
        for hop in 0..2 {
            // two packets per TTI on the first hop, one on the relay hop
            for _ in 0..(2 - hop) {
                let Some(seq) = st.next_payload(hop, t) else { break };
                let lost = rng.random::<f64>() < if hop == 0 { 0.1 } else { 0.3 };
                st.on_receive(hop, seq, lost);
            }
        }
        assert!(st.conservation_holds());
        k += 1;
        t = k as f64 * dt;
        if k.is_multiple_of(100) {
            for hop in 0..2 {
                let r = st.make_report(hop, t)?;
                st.apply_report(&r);
            }
        }
    }
    println!("complete after {t:.3} s");
    for hop in 0..2 {
        println!(
            "hop {hop}: {} transmissions, {} lost, {} duplicates, {} distinct bytes",
            st.transmissions(hop),
            st.lost(hop),
            st.duplicates(hop),
            st.distinct_received_bytes(hop)
        );
    }
    Ok(())
}
