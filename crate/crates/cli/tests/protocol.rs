//! Conformance of `semprobe serve-mock` with the stdio wire protocol.

use std::io::{BufRead, BufReader, Write};
use std::process::{Child, ChildStdin, ChildStdout, Command, Stdio};

use semprobe::encoder::{mock_encode, BackendKind, BackendSpec, Gateway};
use serde_json::{json, Value};

const BIN: &str = env!("CARGO_BIN_EXE_semprobe");

struct Server {
    child: Child,
    stdin: ChildStdin,
    stdout: BufReader<ChildStdout>,
}

impl Server {
    fn start(dim: usize, seed: u64) -> Self {
        let mut child = Command::new(BIN)
            .args(["serve-mock", "--dim", &dim.to_string(), "--seed", &seed.to_string(), "--name", "stub"])
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .spawn()
            .unwrap();
        let stdin = child.stdin.take().unwrap();
        let stdout = BufReader::new(child.stdout.take().unwrap());
        Server { child, stdin, stdout }
    }

    fn ask(&mut self, line: &str) -> Value {
        writeln!(self.stdin, "{line}").unwrap();
        self.stdin.flush().unwrap();
        let mut reply = String::new();
        self.stdout.read_line(&mut reply).unwrap();
        serde_json::from_str(&reply).unwrap()
    }
}

impl Drop for Server {
    fn drop(&mut self) {
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}

#[test]
fn handshake_reports_name_and_dim() {
    let mut s = Server::start(12, 0);
    assert_eq!(s.ask(r#"{"op": "info"}"#), json!({"name": "stub", "dim": 12}));
}

#[test]
fn encode_returns_one_vector_per_text() {
    let mut s = Server::start(16, 4);
    let reply = s.ask(r#"{"id": "7", "op": "encode", "texts": ["a cat", "the dog sat"]}"#);
    assert_eq!(reply["id"], "7");
    assert_eq!(reply["dim"], 16);
    let vectors: Vec<Vec<f64>> = serde_json::from_value(reply["vectors"].clone()).unwrap();
    let expected = mock_encode(&["a cat".to_string(), "the dog sat".to_string()], 16, 4);
    assert_eq!(vectors, expected);
}

#[test]
fn malformed_lines_get_errors_and_the_server_survives() {
    let mut s = Server::start(8, 1);
    let reply = s.ask("this is not json");
    assert!(reply["error"].as_str().unwrap().contains("malformed"), "{reply}");
    let reply = s.ask(r#"{"id": "1", "op": "encode", "texts": "oops"}"#);
    assert_eq!(reply["id"], "1");
    assert!(reply.get("error").is_some());
    let reply = s.ask(r#"{"id": "2", "op": "fly"}"#);
    assert!(reply["error"].as_str().unwrap().contains("unknown op"));
    let reply = s.ask(r#"{"id": "3", "op": "encode", "texts": ["still here"]}"#);
    assert_eq!(reply["vectors"].as_array().unwrap().len(), 1);
}

#[test]
fn gateway_over_subprocess_matches_in_process_mock() {
    let command: Vec<String> = [BIN, "serve-mock", "--dim", "32", "--seed", "9", "--name", "sub"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let spec = BackendSpec {
        encoder_id: "sub".into(),
        kind: BackendKind::Subprocess { command },
        batch_size: 3,
    };
    let remote = Gateway::uncached(spec).unwrap();
    let local = Gateway::uncached(BackendSpec::mock("sub", 32, 9)).unwrap();
    let texts: Vec<String> = (0..10).map(|i| format!("sentence number {i}")).collect();
    let a = remote.encode_batch(&texts).unwrap();
    let b = local.encode_batch(&texts).unwrap();
    assert_eq!(a, b);
    // 10 texts in batches of 3.
    assert_eq!(remote.backend_calls(), 4);
}
