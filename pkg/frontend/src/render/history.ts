import type { HistoryView } from "../types.js";
import { el, VNode } from "../vdom.js";
import { expectKind, fmtRatio, SchemaError } from "./common.js";

export interface HistoryHooks {
  onRestore(index: number): void;
}

const NO_HOOKS: HistoryHooks = { onRestore: () => undefined };

/** History view: operation table with train/test error columns and a
 * restore control per row. */
export function renderHistory(payload: HistoryView, hooks: HistoryHooks = NO_HOOKS): VNode {
  expectKind(payload, "history");
  if (!Array.isArray(payload.records)) throw new SchemaError("history payload has no records");
  const rows = payload.records.map((r) =>
    el("tr", { class: "history-row", "data-index": String(r.index) }, [
      el("td", { class: "history-index" }, [String(r.index)]),
      el("td", { class: "history-operation" }, [r.operation]),
      el("td", { class: "history-train-error" }, [fmtRatio(r.train_error)]),
      el("td", { class: "history-test-error" }, [fmtRatio(r.test_error)]),
      el("td", {}, [
        el("button", { class: "restore" }, ["restore"], { click: () => hooks.onRestore(r.index) }),
      ]),
    ]),
  );
  return el("div", { class: "view history-view" }, [
    el("table", { class: "history-table" }, [
      el("thead", {}, [
        el("tr", {}, [
          el("th", {}, ["#"]),
          el("th", {}, ["operation"]),
          el("th", {}, ["train error"]),
          el("th", {}, ["test error"]),
          el("th", {}, [""]),
        ]),
      ]),
      el("tbody", {}, rows),
    ]),
  ]);
}
