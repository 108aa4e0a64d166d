//! Drives the verifiers from .ham documents, the same files the hamcheck
//! binary consumes. Shows parsing, pretty-printing and programmatic use of a
//! parsed document.
//!
//! ```bash
//! cargo run --example dsl_documents
//! ```

use hamcheck::dsl::DslDocument;
use hamcheck::{BracketStructure, Domain};

fn main() {
    let text = "\
# Lie-Poisson bracket on the circle
var m on S1
var u on S1
op P = -(2*m*D_x + m_x*Id)
grad H = u
subst m -> u - u_xx
";
    let doc = DslDocument::parse(text).unwrap();
    println!("canonical form:\n{}", doc.to_text());

    let (state, domain) = doc.state_var().unwrap();
    assert_eq!(domain, Domain::Circle);
    let bracket =
        BracketStructure::new(doc.ops[0].1.clone(), state, domain).unwrap();

    let jacobi = bracket.jacobi_check();
    println!("jacobi: {}", if jacobi.passes { "pass" } else { "fail" });

    let grad = &doc.grads[0].1;
    let rhs = bracket.derive_evolution(grad, &doc.substs).unwrap();
    println!("evolution: {}_t = {}", state, rhs);

    // expression parsing in the document's variable context, as used by the
    // command-line flags
    let casimir = doc.parse_functional("int(m)").unwrap();
    let report = bracket.casimir_check(&casimir);
    println!(
        "int(m) is a Casimir: {} (P dC = {})",
        report.is_casimir, report.residual
    );
}
