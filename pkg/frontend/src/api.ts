// Typed client for the ask/library/briefcase/feedback API.

import { NdjsonParser } from "./stream";
import type {
  AskFrame,
  AskRequest,
  DocumentFull,
  FeedbackRequest,
  LibraryPage,
  LibraryQuery,
} from "./types";

export interface ApiClient {
  baseUrl: string;
  token: string;
}

function headers(client: ApiClient, json = true): Record<string, string> {
  const h: Record<string, string> = { Authorization: `Bearer ${client.token}` };
  if (json) h["Content-Type"] = "application/json";
  return h;
}

export class ApiError extends Error {
  constructor(
    public status: number,
    message: string,
  ) {
    super(message);
  }
}

async function raiseForStatus(resp: Response): Promise<void> {
  if (resp.ok) return;
  let detail = resp.statusText;
  try {
    const payload = await resp.json();
    if (payload && typeof payload.detail === "string") detail = payload.detail;
  } catch {
    // non-JSON error body; keep the status text
  }
  throw new ApiError(resp.status, detail);
}

/** Stream one ask; onFrame fires per frame in order. */
export async function askStream(
  client: ApiClient,
  body: AskRequest,
  onFrame: (frame: AskFrame) => void,
): Promise<void> {
  const resp = await fetch(`${client.baseUrl}/ask`, {
    method: "POST",
    headers: headers(client),
    body: JSON.stringify(body),
  });
  await raiseForStatus(resp);
  if (!resp.body) throw new ApiError(0, "response has no body");
  const reader = resp.body.getReader();
  const decoder = new TextDecoder();
  const parser = new NdjsonParser();
  for (;;) {
    const { value, done } = await reader.read();
    if (done) break;
    for (const frame of parser.push(decoder.decode(value, { stream: true }))) {
      onFrame(frame);
    }
  }
  for (const frame of parser.push(decoder.decode())) onFrame(frame);
  for (const frame of parser.finish()) onFrame(frame);
}

export function libraryParams(query: LibraryQuery): URLSearchParams {
  const params = new URLSearchParams();
  for (const [key, value] of Object.entries(query)) {
    if (value !== undefined && value !== null && value !== "") {
      params.set(key, String(value));
    }
  }
  return params;
}

export async function libraryList(client: ApiClient, query: LibraryQuery): Promise<LibraryPage> {
  const params = libraryParams(query);
  const resp = await fetch(`${client.baseUrl}/library?${params}`, {
    headers: headers(client, false),
  });
  await raiseForStatus(resp);
  return (await resp.json()) as LibraryPage;
}

export async function getDocument(client: ApiClient, docId: string): Promise<DocumentFull> {
  const resp = await fetch(`${client.baseUrl}/library/${encodeURIComponent(docId)}`, {
    headers: headers(client, false),
  });
  await raiseForStatus(resp);
  return (await resp.json()) as DocumentFull;
}

export async function uploadBriefcase(
  client: ApiClient,
  title: string,
  text: string,
): Promise<{ doc_id: string; chunks: number }> {
  const resp = await fetch(`${client.baseUrl}/briefcase`, {
    method: "POST",
    headers: headers(client),
    body: JSON.stringify({ title, text }),
  });
  await raiseForStatus(resp);
  return (await resp.json()) as { doc_id: string; chunks: number };
}

/** Returns the HTTP status (204 on success, 409 on duplicate vote). */
export async function postFeedback(client: ApiClient, body: FeedbackRequest): Promise<number> {
  const resp = await fetch(`${client.baseUrl}/feedback`, {
    method: "POST",
    headers: headers(client),
    body: JSON.stringify(body),
  });
  if (resp.status !== 409) await raiseForStatus(resp);
  return resp.status;
}
