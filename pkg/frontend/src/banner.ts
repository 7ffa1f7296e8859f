/** Dismissible error banners for API failures. */

export function showError(host: HTMLElement, message: string, doc: Document = document): void {
    const banner = doc.createElement("div");
    banner.className = "error-banner";
    const text = doc.createElement("span");
    text.textContent = message;
    banner.appendChild(text);
    const close = doc.createElement("button");
    close.type = "button";
    close.className = "dismiss";
    close.textContent = "×";
    close.addEventListener("click", () => banner.remove());
    banner.appendChild(close);
    host.prepend(banner);
}
