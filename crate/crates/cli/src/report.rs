use serde::Serialize;

use crate::commands::BlockOutcome;

pub const TOOL: &str = "siframes";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub input_digest: String,
    pub pass: bool,
    pub exact: bool,
    pub blocks: Vec<BlockOutcome>,
}

impl Report {
    pub fn new(command: impl Into<String>, input_digest: String, blocks: Vec<BlockOutcome>) -> Self {
        Report {
            tool: TOOL,
            version: VERSION,
            command: command.into(),
            input_digest,
            pass: blocks.iter().all(|b| b.pass),
            exact: blocks.iter().all(|b| b.exact),
            blocks,
        }
    }

    /// 0 when every block passed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.pass {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// CSV sections of the blocks that produce one, or `None`.
    pub fn to_csv(&self) -> Option<String> {
        let parts: Vec<&str> = self.blocks.iter().filter_map(|b| b.csv.as_deref()).collect();
        (!parts.is_empty()).then(|| parts.join("\n"))
    }
}
