// Minimal virtual-node layer. Render functions build plain trees that the
// test suite can inspect and click without a browser; mount() converts a
// tree to real DOM when one is available.

export interface VNode {
  tag: string;
  attrs: Record<string, string>;
  children: Child[];
  onClick?: () => void;
}

export type Child = VNode | string;

export function h(
  tag: string,
  attrs: Record<string, string> = {},
  children: Child[] = [],
  onClick?: () => void,
): VNode {
  return { tag, attrs, children, onClick };
}

export function isVNode(child: Child): child is VNode {
  return typeof child !== "string";
}

export function textContent(node: VNode): string {
  return node.children
    .map((c) => (isVNode(c) ? textContent(c) : c))
    .join("");
}

export function findAll(node: VNode, predicate: (n: VNode) => boolean): VNode[] {
  const hits: VNode[] = [];
  const walk = (n: VNode): void => {
    if (predicate(n)) hits.push(n);
    for (const child of n.children) {
      if (isVNode(child)) walk(child);
    }
  };
  walk(node);
  return hits;
}

export function byClass(node: VNode, klass: string): VNode[] {
  return findAll(node, (n) => (n.attrs.class ?? "").split(" ").includes(klass));
}

export function click(node: VNode): void {
  if (!node.onClick) {
    throw new Error(`node <${node.tag}> is not clickable`);
  }
  node.onClick();
}

export function mount(node: VNode, parent: HTMLElement): HTMLElement {
  const el = document.createElement(node.tag);
  for (const [key, value] of Object.entries(node.attrs)) {
    el.setAttribute(key, value);
  }
  if (node.onClick) {
    el.addEventListener("click", (event) => {
      event.stopPropagation();
      node.onClick!();
    });
  }
  for (const child of node.children) {
    if (isVNode(child)) {
      mount(child, el);
    } else {
      el.appendChild(document.createTextNode(child));
    }
  }
  parent.appendChild(el);
  return el;
}
