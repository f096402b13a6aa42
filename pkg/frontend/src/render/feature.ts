import type { FeatureView } from "../types.js";
import { el, VNode } from "../vdom.js";
import { expectKind, SchemaError } from "./common.js";

export interface FeatureHooks {
  onToggle(feature: number, allowed: boolean): void;
}

const NO_HOOKS: FeatureHooks = { onToggle: () => undefined };

/** Feature view: groups with counts, allowed toggles, in-use markers. */
export function renderFeature(payload: FeatureView, hooks: FeatureHooks = NO_HOOKS): VNode {
  expectKind(payload, "feature");
  if (!Array.isArray(payload.groups)) throw new SchemaError("feature payload has no groups");
  const groups = payload.groups.map((group) =>
    el("section", { class: "feature-group" }, [
      el("h3", { class: "feature-group-header" }, [`${group.label} (${group.count})`]),
      el(
        "ul",
        { class: "feature-list" },
        group.features.map((f) =>
          el(
            "li",
            {
              class: [
                "feature-item",
                f.allowed ? "allowed" : "blocked",
                f.selected ? "selected" : "unused",
              ].join(" "),
              "data-feature": String(f.id),
            },
            [
              el(
                "button",
                {
                  class: "feature-toggle",
                  title: f.allowed ? `block ${f.name}` : `allow ${f.name}`,
                },
                [f.allowed ? "✓" : "✗"],
                { click: () => hooks.onToggle(f.id, f.allowed) },
              ),
              el("span", { class: "feature-name" }, [f.name]),
              el("span", { class: "feature-kind" }, [f.kind]),
              f.selected ? el("span", { class: "feature-in-use" }, ["in use"]) : "",
            ].filter((c) => c !== "") as VNode[],
          ),
        ),
      ),
    ]),
  );
  return el("div", { class: "view feature-view", "data-strategy": payload.strategy }, groups);
}
