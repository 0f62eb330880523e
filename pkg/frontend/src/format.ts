/** Display helpers.
 *
 * Numbers are rendered verbatim (String(v)), never rounded: every digit the
 * UI shows must equal the API's value exactly.
 */

export const showNumber = (v: number): string => String(v);

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  children: (Node | string)[] = [],
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    if (key === "class") node.className = value;
    else node.setAttribute(key, value);
  }
  for (const child of children) {
    node.append(child);
  }
  return node;
}
