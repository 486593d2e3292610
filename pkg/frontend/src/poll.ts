/** Progress polling: one request in flight at a time, stops on a
 * terminal state or when the abort signal fires. */
import type { ServiceClient } from "./api.js";
import type { ProgressJson } from "./types.js";

export interface PollOptions {
  intervalMs?: number;
  onUpdate?: (doc: ProgressJson) => void;
  signal?: AbortSignal;
}

function sleep(ms: number, signal?: AbortSignal): Promise<void> {
  return new Promise((resolve, reject) => {
    const t = setTimeout(done, ms);
    function done() {
      signal?.removeEventListener("abort", onAbort);
      resolve();
    }
    function onAbort() {
      clearTimeout(t);
      signal?.removeEventListener("abort", onAbort);
      reject(new DOMException("polling aborted", "AbortError"));
    }
    signal?.addEventListener("abort", onAbort);
  });
}

export async function pollProgress(
  client: ServiceClient,
  jobId: string,
  options: PollOptions = {},
): Promise<ProgressJson> {
  const interval = options.intervalMs ?? 400;
  for (;;) {
    if (options.signal?.aborted) {
      throw new DOMException("polling aborted", "AbortError");
    }
    const doc = await client.getProgress(jobId);
    options.onUpdate?.(doc);
    if (doc.state === "finished" || doc.state === "failed") return doc;
    await sleep(interval, options.signal);
  }
}

export function barPercent(doc: ProgressJson): number {
  return Math.round(doc.fraction * 100);
}

export function progressLabel(doc: ProgressJson): string {
  return `${doc.completed}/${doc.total} (${barPercent(doc)}%)`;
}
