import { el, VNode } from "../vdom.js";

export class SchemaError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "SchemaError";
  }
}

export function expectKind(payload: unknown, kind: string): void {
  const k = (payload as { kind?: unknown } | null)?.kind;
  if (k !== kind) throw new SchemaError(`expected a ${kind} payload, got ${String(k)}`);
}

export function errorBanner(message: string): VNode {
  return el("div", { class: "error-banner", role: "alert" }, [message]);
}

/** Render one view; a schema mismatch yields the banner and nothing else of
 * the failed view (no partial render). */
export function renderSafe(render: () => VNode): VNode {
  try {
    return render();
  } catch (err) {
    if (err instanceof SchemaError) return errorBanner(err.message);
    throw err;
  }
}

export function fmtRatio(x: number): string {
  return x.toFixed(4);
}

export function fmtGamma(x: number): string {
  return x.toFixed(3);
}
