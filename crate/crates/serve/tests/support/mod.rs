//! A gateway on an ephemeral port, torn down on drop.

#![allow(dead_code)]

use std::sync::Arc;
use std::time::Duration;

use fooctts_serve::{http, Gateway, ServeConfig};

pub struct TestServer {
    pub base: String,
    pub gateway: Arc<Gateway>,
    stop: Option<tokio::sync::oneshot::Sender<()>>,
    runtime: Option<tokio::runtime::Runtime>,
}

impl TestServer {
    pub fn start(cfg: ServeConfig) -> Self {
        let gateway = Arc::new(Gateway::new(cfg).expect("valid config"));
        let runtime = tokio::runtime::Builder::new_multi_thread().enable_all().build().unwrap();
        let listener = runtime.block_on(tokio::net::TcpListener::bind("127.0.0.1:0")).unwrap();
        let base = format!("http://{}", listener.local_addr().unwrap());
        let (stop, stopped) = tokio::sync::oneshot::channel::<()>();
        runtime.spawn(http::serve_on(listener, Arc::clone(&gateway), async {
            let _ = stopped.await;
        }));
        Self {
            base,
            gateway,
            stop: Some(stop),
            runtime: Some(runtime),
        }
    }
}

impl Drop for TestServer {
    fn drop(&mut self) {
        if let Some(stop) = self.stop.take() {
            let _ = stop.send(());
        }
        if let Some(rt) = self.runtime.take() {
            rt.shutdown_timeout(Duration::from_secs(2));
        }
    }
}

pub fn agent() -> ureq::Agent {
    ureq::Agent::new_with_config(ureq::Agent::config_builder().http_status_as_error(false).build())
}

pub struct Reply {
    pub status: u16,
    pub headers: Vec<(String, String)>,
    pub body: Vec<u8>,
}

impl Reply {
    pub fn header(&self, name: &str) -> Option<&str> {
        self.headers.iter().find(|(k, _)| k.eq_ignore_ascii_case(name)).map(|(_, v)| v.as_str())
    }

    pub fn json(&self) -> serde_json::Value {
        serde_json::from_slice(&self.body).expect("JSON body")
    }
}

fn collect(mut res: ureq::http::Response<ureq::Body>) -> Reply {
    let headers = res
        .headers()
        .iter()
        .map(|(k, v)| (k.to_string(), v.to_str().unwrap_or("").to_string()))
        .collect();
    Reply {
        status: res.status().as_u16(),
        headers,
        body: res.body_mut().with_config().limit(64 << 20).read_to_vec().unwrap(),
    }
}

pub fn post(base: &str, path: &str, body: &str) -> Reply {
    collect(
        agent()
            .post(&format!("{base}{path}"))
            .header("Content-Type", "application/json")
            .send(body)
            .unwrap(),
    )
}

pub fn get(base: &str, path: &str) -> Reply {
    collect(agent().get(&format!("{base}{path}")).call().unwrap())
}

/// Undoes the percent-encoding of `X-Vowelized-Text`.
pub fn percent_decode(s: &str) -> String {
    let bytes = s.as_bytes();
    let mut out = Vec::with_capacity(bytes.len());
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'%' {
            out.push(u8::from_str_radix(&s[i + 1..i + 3], 16).unwrap());
            i += 3;
        } else {
            out.push(bytes[i]);
            i += 1;
        }
    }
    String::from_utf8(out).unwrap()
}
