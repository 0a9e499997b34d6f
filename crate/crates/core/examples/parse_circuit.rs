// Parse a circuit, inspect its parameter slots, and strip the angles.

use bridgq::{parse_qasm, GateRole};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let source = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/maxcut4.qasm"))?;
    let template = parse_qasm(&source)?;

    println!(
        "{} qubits, {} gates, {} slots ({} drivers, {} entanglers)",
        template.num_qubits,
        template.gates.len(),
        template.slot_count(),
        template.count_role(GateRole::Driver),
        template.count_role(GateRole::Entangler),
    );
    for (kind, count) in template.gate_histogram() {
        println!("  {kind}: {count}");
    }
    println!("original angles: {:?}", template.baseline_parameters()?);

    let stripped = template.strip_parameters();
    assert!(stripped.is_stripped());
    assert_eq!(stripped.slot_count(), template.slot_count());
    print!("{}", stripped.to_qasm());
    Ok(())
}

fn main() {
    run_example().unwrap();
}
