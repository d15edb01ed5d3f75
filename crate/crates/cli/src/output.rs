use serde_json::{json, Value};

use crate::Format;

/// Writes each result either as plain text or as one JSON object per line.
pub struct Out {
    format: Format,
}

impl Out {
    pub fn new(format: Format) -> Self {
        Out { format }
    }

    pub fn emit(&self, op: &str, inputs: Value, text: &str, result: Value) {
        match self.format {
            Format::Text => println!("{text}"),
            Format::JsonLines => println!("{}", json!({ "op": op, "inputs": inputs, "result": result })),
        }
    }
}
