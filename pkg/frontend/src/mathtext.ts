/** Inline $…$ typesetting. Delegates to a page-provided math renderer
 *  (window.katex, loaded by the shell) and degrades to styled spans. */

declare global {
    interface Window {
        katex?: { renderToString(tex: string, opts?: Record<string, unknown>): string };
    }
}

function renderFragment(tex: string): HTMLElement {
    const span = document.createElement("span");
    span.className = "math";
    const katex = typeof window !== "undefined" ? window.katex : undefined;
    if (katex) {
        try {
            span.innerHTML = katex.renderToString(tex, { throwOnError: false });
            return span;
        } catch {
            // fall through to the plain presentation
        }
    }
    span.textContent = tex;
    return span;
}

/** Replace every $…$ run inside text nodes with a typeset element. */
export function typesetMathIn(root: ParentNode): void {
    const doc = (root as Node).ownerDocument ?? document;
    const walker = doc.createTreeWalker(root as Node, NodeFilter.SHOW_TEXT);
    const targets: Text[] = [];
    for (let node = walker.nextNode(); node; node = walker.nextNode()) {
        if (node.nodeValue && node.nodeValue.includes("$")) {
            targets.push(node as Text);
        }
    }
    for (const text of targets) {
        const value = text.nodeValue ?? "";
        const parts = value.split("$");
        if (parts.length < 3) {
            continue; // unmatched single $, leave as is
        }
        const fragment = doc.createDocumentFragment();
        parts.forEach((part, index) => {
            if (index % 2 === 0) {
                if (part) fragment.appendChild(doc.createTextNode(part));
            } else {
                fragment.appendChild(renderFragment(part));
            }
        });
        text.replaceWith(fragment);
    }
}

/** Set rich text (trusted, server-produced HTML with $…$ math) and typeset. */
export function setMathHtml(element: HTMLElement, html: string): void {
    element.innerHTML = html;
    typesetMathIn(element);
}
