use serde::Serialize;
use serde_json::Value;

pub const SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails,
    Indeterminate,
}

impl Verdict {
    pub fn exit_code(self) -> u8 {
        match self {
            Verdict::Holds | Verdict::Indeterminate => 0,
            Verdict::Fails => 1,
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Indeterminate => "indeterminate",
        }
    }
}

/// What every subcommand prints. `data` is a JSON object whose keys come out
/// sorted, so identical runs give identical bytes.
#[derive(Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    pub verdict: Verdict,
    pub data: Value,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<Value>,
    /// Human-readable heading for text output.
    #[serde(skip)]
    pub label: &'static str,
}

impl Report {
    pub fn new(command: &str, label: &'static str, verdict: Verdict, data: Value) -> Self {
        Report {
            schema: SCHEMA,
            command: command.to_string(),
            verdict,
            data,
            witnesses: Vec::new(),
            label,
        }
    }

    pub fn witness(mut self, w: Value) -> Self {
        self.witnesses.push(w);
        self
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            let mut s = serde_json::to_string_pretty(self).expect("report serializes");
            s.push('\n');
            return s;
        }
        let mut out = format!(
            "{} [{}]\nverdict: {}\n",
            self.label,
            self.command,
            self.verdict.as_str()
        );
        if let Value::Object(map) = &self.data {
            for (key, value) in map {
                out.push_str(&format!("{key}: {}\n", plain(value)));
            }
        }
        for w in &self.witnesses {
            out.push_str(&format!("witness: {}\n", plain(w)));
        }
        out
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "none".into(),
        other => other.to_string(),
    }
}
