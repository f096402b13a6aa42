/** Tiny virtual-node layer.
 *
 * Renderers return plain VNode trees so contract tests can assert on
 * structure without a DOM; mount() realizes a tree in the browser.
 */

export type Handler = (ev: Event) => void;

export interface VNode {
  tag: string;
  attrs: Record<string, string>;
  children: Array<VNode | string>;
  on: Record<string, Handler>;
}

export function el(
  tag: string,
  attrs: Record<string, string> = {},
  children: Array<VNode | string> = [],
  on: Record<string, Handler> = {},
): VNode {
  return { tag, attrs, children, on };
}

export function mount(node: VNode, doc: Document): HTMLElement {
  const dom = doc.createElement(node.tag);
  for (const [k, v] of Object.entries(node.attrs)) dom.setAttribute(k, v);
  for (const [event, handler] of Object.entries(node.on)) dom.addEventListener(event, handler);
  for (const child of node.children) {
    dom.appendChild(typeof child === "string" ? doc.createTextNode(child) : mount(child, doc));
  }
  return dom;
}

/** Depth-first search over a VNode tree (tests and event wiring). */
export function findAll(root: VNode, pred: (n: VNode) => boolean): VNode[] {
  const out: VNode[] = [];
  const walk = (n: VNode) => {
    if (pred(n)) out.push(n);
    for (const c of n.children) if (typeof c !== "string") walk(c);
  };
  walk(root);
  return out;
}

export function textOf(node: VNode): string {
  return node.children.map((c) => (typeof c === "string" ? c : textOf(c))).join("");
}

export function byClass(root: VNode, cls: string): VNode[] {
  return findAll(root, (n) => (n.attrs["class"] ?? "").split(" ").includes(cls));
}
