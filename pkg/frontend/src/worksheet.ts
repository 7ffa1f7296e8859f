/** Worksheet view: a form generated from the server's control spec; results
 *  are re-requested on every change of the show-answers flag (the key is
 *  never cached client-side). */

import { api, ApiError, ControlSpec, FormSpec, TemplatesResponse } from "./api.js";
import { showError } from "./banner.js";
import { setMathHtml } from "./mathtext.js";

function renderControl(name: string, spec: ControlSpec, doc: Document): HTMLElement {
    const wrap = doc.createElement("label");
    wrap.className = `control control-${spec.kind}`;
    wrap.dataset.control = name;
    if (spec.label) {
        wrap.appendChild(doc.createTextNode(spec.label + " "));
    }
    let input: HTMLElement;
    switch (spec.kind) {
        case "checkbox": {
            const box = doc.createElement("input");
            box.type = "checkbox";
            box.name = name;
            box.checked = Boolean(spec.default);
            input = box;
            break;
        }
        case "slider": {
            const slider = doc.createElement("input");
            slider.type = "range";
            slider.name = name;
            if (spec.vmin) slider.min = spec.vmin;
            if (spec.vmax) slider.max = spec.vmax;
            slider.value = String(spec.default ?? spec.vmin ?? "0");
            input = slider;
            break;
        }
        case "selector": {
            const select = doc.createElement("select");
            select.name = name;
            for (const value of spec.values ?? []) {
                const option = doc.createElement("option");
                option.value = value;
                option.textContent = value;
                if (value === spec.default) option.selected = true;
                select.appendChild(option);
            }
            input = select;
            break;
        }
        default: {
            // input_box and anything unknown degrade to a text field
            const box = doc.createElement("input");
            box.type = "text";
            box.name = name;
            box.value = String(spec.default ?? "");
            if (spec.width) box.size = Number(spec.width);
            input = box;
        }
    }
    wrap.appendChild(input);
    return wrap;
}

function renderFormSpec(spec: FormSpec, doc: Document): HTMLFormElement {
    const form = doc.createElement("form");
    form.className = "worksheet-form";
    form.addEventListener("submit", (event) => event.preventDefault());
    if (spec.caption) {
        const caption = doc.createElement("p");
        caption.textContent = spec.caption;
        form.appendChild(caption);
    }
    for (const zone of ["top", "left", "right", "bottom"] as const) {
        for (const row of spec.grid[zone] ?? []) {
            const rowEl = doc.createElement("div");
            rowEl.className = `form-row zone-${zone}`;
            for (const name of row) {
                const control = spec.controls[name];
                if (control) rowEl.appendChild(renderControl(name, control, doc));
            }
            form.appendChild(rowEl);
        }
    }
    return form;
}

export class WorksheetController {
    private lastRequest: { template: string; num_variants: number; seed: number } | null = null;

    constructor(
        private host: HTMLElement,
        private doc: Document = document,
    ) {}

    async run(): Promise<void> {
        let listing: TemplatesResponse;
        try {
            listing = await api.templates();
        } catch (err) {
            this.fail(err);
            return;
        }
        const doc = this.doc;
        this.host.textContent = "";

        const picker = doc.createElement("select");
        picker.id = "template-picker";
        for (const template of listing.templates) {
            const option = doc.createElement("option");
            option.value = template.id;
            option.textContent = template.title;
            picker.appendChild(option);
        }
        this.host.appendChild(picker);

        const form = renderFormSpec(listing.form_spec, doc);
        this.host.appendChild(form);

        const generate = doc.createElement("button");
        generate.type = "button";
        generate.id = "btn-generate";
        generate.textContent = "Згенерувати";
        this.host.appendChild(generate);

        const downloads = doc.createElement("div");
        downloads.id = "downloads";
        this.host.appendChild(downloads);

        const output = doc.createElement("section");
        output.id = "worksheet-output";
        this.host.appendChild(output);

        const readForm = () => {
            const field = (name: string) =>
                form.querySelector<HTMLInputElement>(`[name=${name}]`);
            return {
                template: picker.value,
                num_variants: Number(field("num_variants")?.value ?? "1"),
                seed: Number(field("seed")?.value ?? "0"),
                show_answers: field("show_answers")?.checked ?? false,
            };
        };

        generate.addEventListener("click", () => {
            void this.generate(readForm(), output, downloads);
        });
        const answersBox = form.querySelector<HTMLInputElement>("[name=show_answers]");
        answersBox?.addEventListener("change", () => {
            // re-request with the flag; the answer key never lives client-side
            if (this.lastRequest) {
                void this.generate(
                    { ...this.lastRequest, show_answers: answersBox.checked },
                    output,
                    downloads,
                );
            }
        });
    }

    private async generate(
        body: { template: string; num_variants: number; seed: number; show_answers: boolean },
        output: HTMLElement,
        downloads: HTMLElement,
    ): Promise<void> {
        try {
            const result = await api.generateWorksheet(body);
            this.lastRequest = {
                template: body.template,
                num_variants: body.num_variants,
                seed: body.seed,
            };
            setMathHtml(output, result.html);
            this.renderDownloads(downloads, result.html, result.latex);
        } catch (err) {
            if (err instanceof ApiError && err.body.code === "NonGenerable") {
                const details = err.body.details ?? {};
                this.fail(
                    new Error(
                        `${err.body.message} (варіант ${details["variant"]}, завдання ${details["task"]})`,
                    ),
                );
                return;
            }
            this.fail(err);
        }
    }

    private renderDownloads(host: HTMLElement, html: string, latex: string): void {
        host.textContent = "";
        const items: [string, string, string][] = [
            ["worksheet.html", "text/html", html],
            ["worksheet.tex", "application/x-tex", latex],
        ];
        for (const [filename, type, content] of items) {
            const link = this.doc.createElement("a");
            link.download = filename;
            link.textContent = filename;
            link.className = "download-link";
            if (typeof URL.createObjectURL === "function") {
                link.href = URL.createObjectURL(new Blob([content], { type }));
            } else {
                link.href = `data:${type};charset=utf-8,${encodeURIComponent(content)}`;
            }
            host.appendChild(link);
        }
    }

    private fail(err: unknown): void {
        const message = err instanceof ApiError ? `${err.body.code}: ${err.body.message}` : String(err);
        showError(this.host, message, this.doc);
    }
}
