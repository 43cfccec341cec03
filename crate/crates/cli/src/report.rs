use serde_json::{json, Value};

/// The JSON document printed on stdout.
///
/// Keys come out sorted. Timing is only included on request, so that the
/// same command line and seed always give the same bytes.
#[derive(Clone, Debug, PartialEq)]
pub struct RunReport {
    pub command: &'static str,
    pub inputs: Value,
    pub result: Value,
    pub seed: Option<u64>,
    pub elapsed_ms: Option<f64>,
}

impl RunReport {
    pub fn new(command: &'static str, inputs: Value, result: Value, seed: Option<u64>) -> Self {
        RunReport { command, inputs, result, seed, elapsed_ms: None }
    }

    pub fn to_json(&self) -> String {
        let mut v = json!({
            "command": self.command,
            "inputs": self.inputs,
            "result": self.result,
            "seed": self.seed,
        });
        if let Some(ms) = self.elapsed_ms {
            v["timing"] = json!({ "elapsed_ms": ms });
        }
        serde_json::to_string(&v).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_are_sorted() {
        let r = RunReport::new("x", json!({"b": 1, "a": 2}), json!({"z": true, "m": null}), Some(3));
        assert_eq!(
            r.to_json(),
            r#"{"command":"x","inputs":{"a":2,"b":1},"result":{"m":null,"z":true},"seed":3}"#
        );
    }
}
