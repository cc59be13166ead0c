use std::net::SocketAddr;
use std::num::NonZeroUsize;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use isobenefit_service::{router, AppState};

/// HTTP server for isobenefit sessions.
#[derive(Debug, Parser)]
#[command(name = "isobenefit-server", version)]
struct Config {
    #[arg(long, env = "ISOBENEFIT_LISTEN", default_value = "127.0.0.1:8080")]
    listen: SocketAddr,
    /// Number of computed fields kept in memory.
    #[arg(long, env = "ISOBENEFIT_CACHE_SIZE", default_value = "32")]
    cache_size: NonZeroUsize,
    /// Sessions are loaded from here at start-up and written back on shutdown.
    #[arg(long, env = "ISOBENEFIT_SNAPSHOT")]
    snapshot: Option<PathBuf>,
}

async fn shutdown_signal() {
    let ctrl_c = async {
        let _ = tokio::signal::ctrl_c().await;
    };
    #[cfg(unix)]
    let terminate = async {
        match tokio::signal::unix::signal(tokio::signal::unix::SignalKind::terminate()) {
            Ok(mut s) => {
                s.recv().await;
            }
            Err(_) => std::future::pending().await,
        }
    };
    #[cfg(not(unix))]
    let terminate = std::future::pending::<()>();
    tokio::select! {
        _ = ctrl_c => {},
        _ = terminate => {},
    }
}

#[tokio::main]
async fn main() -> ExitCode {
    tracing_subscriber::fmt().with_writer(std::io::stderr).init();
    let config = Config::parse();
    let state = AppState::new(config.cache_size);

    if let Some(path) = &config.snapshot {
        if path.exists() {
            let restored = std::fs::read_to_string(path)
                .map_err(|e| e.to_string())
                .and_then(|text| state.restore_sessions(&text));
            match restored {
                Ok(n) => tracing::info!("restored {n} sessions from {}", path.display()),
                Err(e) => {
                    tracing::error!("cannot restore {}: {e}", path.display());
                    return ExitCode::from(1);
                }
            }
        }
    }

    let listener = match tokio::net::TcpListener::bind(config.listen).await {
        Ok(l) => l,
        Err(e) => {
            tracing::error!("cannot listen on {}: {e}", config.listen);
            return ExitCode::from(2);
        }
    };
    tracing::info!("listening on {}", config.listen);
    let served = axum::serve(listener, router(state.clone()))
        .with_graceful_shutdown(shutdown_signal())
        .await;
    if let Err(e) = served {
        tracing::error!("server error: {e}");
    }

    if let Some(path) = &config.snapshot {
        match std::fs::write(path, state.export_sessions()) {
            Ok(()) => tracing::info!("wrote {} sessions to {}", state.session_count(), path.display()),
            Err(e) => {
                tracing::error!("cannot write snapshot {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
    }
    ExitCode::SUCCESS
}
