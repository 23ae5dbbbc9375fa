//! Tiny blocking HTTP/1.1 servers standing in for the external services in
//! tests and local demos: a diacritizer that adds a fatha after every
//! consonant, and a TTS backend that answers with a WAV tone.
//!
//! Only `POST` with a `Content-Length` body is understood. Every accepted
//! request is counted.

use std::io::{BufRead, BufReader, Read, Write};
use std::net::{SocketAddr, TcpListener, TcpStream};
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Arc;
use std::thread::JoinHandle;
use std::time::Duration;

use crate::audio::{encode_wav, synth};
use crate::text::FATHA;

/// Behaviour of a [`MockServer`].
#[derive(Debug, Clone)]
pub enum MockBehavior {
    /// Echo the body with U+064E after each Arabic consonant.
    Fatha,
    /// Reply with this status and an empty body.
    Status(u16),
    /// Sleep before answering as `inner` would.
    Delay(Duration, Box<MockBehavior>),
    /// Reply with a 200 WAV sine of the given duration and sample rate,
    /// regardless of the request.
    Tone { seconds: f64, sample_rate: u32, freq_hz: f64 },
    /// Reply 200 with these bytes.
    Fixed(Vec<u8>),
}

pub struct MockServer {
    addr: SocketAddr,
    hits: Arc<AtomicUsize>,
    stop: Arc<AtomicBool>,
    handle: Option<JoinHandle<()>>,
}

impl MockServer {
    pub fn start(behavior: MockBehavior) -> std::io::Result<Self> {
        let listener = TcpListener::bind("127.0.0.1:0")?;
        listener.set_nonblocking(true)?;
        let addr = listener.local_addr()?;
        let hits = Arc::new(AtomicUsize::new(0));
        let stop = Arc::new(AtomicBool::new(false));
        let handle = {
            let hits = Arc::clone(&hits);
            let stop = Arc::clone(&stop);
            std::thread::spawn(move || accept_loop(listener, behavior, hits, stop))
        };
        Ok(Self {
            addr,
            hits,
            stop,
            handle: Some(handle),
        })
    }

    pub fn url(&self) -> String {
        format!("http://{}/", self.addr)
    }

    pub fn hits(&self) -> usize {
        self.hits.load(Ordering::SeqCst)
    }
}

impl Drop for MockServer {
    fn drop(&mut self) {
        self.stop.store(true, Ordering::SeqCst);
        if let Some(h) = self.handle.take() {
            let _ = h.join();
        }
    }
}

fn accept_loop(listener: TcpListener, behavior: MockBehavior, hits: Arc<AtomicUsize>, stop: Arc<AtomicBool>) {
    while !stop.load(Ordering::SeqCst) {
        match listener.accept() {
            Ok((stream, _)) => {
                let behavior = behavior.clone();
                let hits = Arc::clone(&hits);
                std::thread::spawn(move || {
                    let _ = handle(stream, &behavior, &hits);
                });
            }
            Err(e) if e.kind() == std::io::ErrorKind::WouldBlock => {
                std::thread::sleep(Duration::from_millis(2));
            }
            Err(_) => break,
        }
    }
}

fn handle(stream: TcpStream, behavior: &MockBehavior, hits: &AtomicUsize) -> std::io::Result<()> {
    stream.set_nonblocking(false)?;
    stream.set_read_timeout(Some(Duration::from_secs(10)))?;
    let mut reader = BufReader::new(stream.try_clone()?);
    let mut writer = stream;
    loop {
        let mut request_line = String::new();
        if reader.read_line(&mut request_line)? == 0 {
            return Ok(());
        }
        let mut content_length = 0usize;
        loop {
            let mut line = String::new();
            reader.read_line(&mut line)?;
            let line = line.trim_end();
            if line.is_empty() {
                break;
            }
            if let Some((name, value)) = line.split_once(':') {
                if name.eq_ignore_ascii_case("content-length") {
                    content_length = value.trim().parse().unwrap_or(0);
                }
            }
        }
        let mut body = vec![0u8; content_length];
        reader.read_exact(&mut body)?;
        hits.fetch_add(1, Ordering::SeqCst);

        let (status, content_type, payload) = respond(behavior, &body);
        write!(
            writer,
            "HTTP/1.1 {status} {}\r\nContent-Type: {content_type}\r\nContent-Length: {}\r\n\r\n",
            reason(status),
            payload.len()
        )?;
        writer.write_all(&payload)?;
        writer.flush()?;
    }
}

fn respond(behavior: &MockBehavior, body: &[u8]) -> (u16, &'static str, Vec<u8>) {
    match behavior {
        MockBehavior::Fatha => {
            let text = String::from_utf8_lossy(body);
            (200, "text/plain; charset=utf-8", add_fatha(&text).into_bytes())
        }
        MockBehavior::Status(code) => (*code, "text/plain", Vec::new()),
        MockBehavior::Delay(d, inner) => {
            std::thread::sleep(*d);
            respond(inner, body)
        }
        MockBehavior::Tone {
            seconds,
            sample_rate,
            freq_hz,
        } => (
            200,
            "audio/wav",
            encode_wav(&synth::sine(*freq_hz, 0.5, *seconds, *sample_rate)),
        ),
        MockBehavior::Fixed(bytes) => (200, "application/octet-stream", bytes.clone()),
    }
}

/// The mock diacritizer's rule: a fatha after every Arabic consonant that
/// does not already carry a mark.
pub fn add_fatha(text: &str) -> String {
    let mut out = String::with_capacity(text.len() * 2);
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.next() {
        out.push(c);
        let consonant = ('\u{0621}'..='\u{064A}').contains(&c) && !matches!(c, 'ا' | 'و' | 'ي' | 'ى' | 'ـ');
        let marked = chars.peek().is_some_and(|n| crate::text::is_diacritic(*n));
        if consonant && !marked {
            out.push(FATHA);
        }
    }
    out
}

fn reason(status: u16) -> &'static str {
    match status {
        200 => "OK",
        400 => "Bad Request",
        404 => "Not Found",
        500 => "Internal Server Error",
        502 => "Bad Gateway",
        503 => "Service Unavailable",
        _ => "Status",
    }
}
