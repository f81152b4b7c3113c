/** Thin typed client for the vibtact HTTP service. */
import type {
  ModelInfoResponse,
  PredictResponse,
  ServiceErrorBody,
  SynthesizeResponse,
  TactonSpec,
} from "./types.js";

export class ServiceError extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    message: string,
    public readonly body?: ServiceErrorBody,
  ) {
    super(message);
    this.name = "ServiceError";
  }
}

async function parseResponse<T>(res: Response): Promise<T> {
  if (res.ok) {
    return (await res.json()) as T;
  }
  let body: ServiceErrorBody | undefined;
  let code = "http_error";
  let message = `${res.status} ${res.statusText}`;
  try {
    body = (await res.json()) as ServiceErrorBody;
    code = body.error.code;
    message = body.error.message;
  } catch {
    // non-JSON error body; keep the HTTP status text
  }
  throw new ServiceError(res.status, code, message, body);
}

export function decodeWaveformB64(data_b64: string): Float32Array {
  const raw = atob(data_b64);
  const bytes = new Uint8Array(raw.length);
  for (let i = 0; i < raw.length; i++) {
    bytes[i] = raw.charCodeAt(i);
  }
  // payload is little-endian float32; assume a little-endian host, which
  // covers every platform this playground targets
  return new Float32Array(bytes.buffer);
}

export class ServiceClient {
  constructor(public readonly baseUrl: string) {}

  private url(path: string): string {
    return this.baseUrl.replace(/\/$/, "") + path;
  }

  async health(): Promise<{ status: string }> {
    return parseResponse(await fetch(this.url("/health")));
  }

  async modelInfo(): Promise<ModelInfoResponse> {
    return parseResponse(await fetch(this.url("/model/info")));
  }

  async synthesize(spec: TactonSpec, fullResolution = false): Promise<SynthesizeResponse> {
    const qs = fullResolution ? "?full_resolution=true" : "";
    const res = await fetch(this.url("/synthesize") + qs, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(spec),
    });
    return parseResponse(res);
  }

  async predict(spec: TactonSpec): Promise<PredictResponse> {
    const res = await fetch(this.url("/predict"), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ spec }),
    });
    return parseResponse(res);
  }
}

/** Runtime endpoint configuration, loaded from a static file next to the
 * bundle so deployments can point at a different service without a rebuild. */
export async function loadEndpoint(configUrl = "./config.json"): Promise<string> {
  try {
    const res = await fetch(configUrl);
    if (res.ok) {
      const cfg = (await res.json()) as { endpoint?: string };
      if (cfg.endpoint) {
        return cfg.endpoint;
      }
    }
  } catch {
    // fall through to the default
  }
  return "http://127.0.0.1:8077";
}
