//! Learns ALARM from 5000 samples with PC-stable and prints the distance to
//! the true equivalence class.

use std::sync::Arc;

use causalkit::bn::forward_sample;
use causalkit::ci::CiSession;
use causalkit::global::{learn_global, GlobalOptions};
use causalkit::metrics::compare_structure;
use causalkit::networks::load_bundled;
use causalkit::Algorithm;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let net = load_bundled("alarm").expect("alarm is bundled")?;
    let data = Arc::new(forward_sample(&net, 5000, 1)?);
    let mut session = CiSession::for_data(data, 0.05)?;
    let result = learn_global(&mut session, Algorithm::PcStable, &GlobalOptions::default())?;
    let metrics = compare_structure(&result.graph, net.graph())?;
    println!(
        "shd = {}, tests = {}",
        metrics.shd,
        session.counter().total_tests
    );
    Ok(())
}
