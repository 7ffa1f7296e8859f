/** Question form: one control set per prompt type plus the universal
 *  "don't know" option and the 50/100 confidence presets. */

import { Question } from "./api.js";
import { typesetMathIn } from "./mathtext.js";

export const NO_RESPONSE = "__no_response__";

export interface AnswerSelection {
    noResponse: boolean;
    values: { value: string | number; cf: number }[];
}

export interface QuestionForm {
    element: HTMLElement;
    /** null while nothing is selected (Answer must stay disabled). */
    read(): AnswerSelection | null;
    onChange(listener: () => void): void;
}

function translate(table: Record<string, string>, key: string, fallback: string): string {
    return table[key] ?? fallback;
}

function choiceLabel(question: Question, value: string, tr: Record<string, string>): string {
    if (question.prompt_type === "YesNo") {
        return value === "yes" ? translate(tr, "TR_YES", "Так") : translate(tr, "TR_NO", "Ні");
    }
    return value;
}

export function renderQuestionForm(
    question: Question,
    translations: Record<string, string>,
    doc: Document = document,
): QuestionForm {
    const listeners: (() => void)[] = [];
    const notify = () => listeners.forEach((listener) => listener());

    const root = doc.createElement("form");
    root.className = "question-form";
    root.addEventListener("submit", (event) => event.preventDefault());

    const prompt = doc.createElement("p");
    prompt.className = "question-prompt";
    prompt.textContent = question.prompt;
    typesetMathIn(prompt);
    root.appendChild(prompt);

    const body = doc.createElement("div");
    body.className = "question-body";
    root.appendChild(body);

    const noRespLabel = translate(translations, "TR_NORESP", "Не знаю");
    let readValues: () => (string | number)[] | null;
    let isNoResponse: () => boolean;

    const radios = (values: string[], withNoResponse: boolean) => {
        for (const value of values) {
            const label = doc.createElement("label");
            const input = doc.createElement("input");
            input.type = "radio";
            input.name = "value";
            input.value = value;
            input.addEventListener("change", notify);
            label.appendChild(input);
            label.appendChild(doc.createTextNode(" " + choiceLabel(question, value, translations)));
            body.appendChild(label);
        }
        if (withNoResponse) {
            const label = doc.createElement("label");
            label.className = "no-response";
            const input = doc.createElement("input");
            input.type = "radio";
            input.name = "value";
            input.value = NO_RESPONSE;
            input.addEventListener("change", notify);
            label.appendChild(input);
            label.appendChild(doc.createTextNode(" " + noRespLabel));
            body.appendChild(label);
        }
        readValues = () => {
            const checked = body.querySelector<HTMLInputElement>("input[name=value]:checked");
            if (!checked || checked.value === NO_RESPONSE) return null;
            return [checked.value];
        };
        isNoResponse = () => {
            const checked = body.querySelector<HTMLInputElement>("input[name=value]:checked");
            return checked?.value === NO_RESPONSE;
        };
    };

    switch (question.prompt_type) {
        case "YesNo":
        case "MultChoice":
        case "ForcedChoice":
            radios(question.choices, question.allow_no_response);
            break;
        case "Choice": {
            const select = doc.createElement("select");
            select.name = "value";
            const placeholder = doc.createElement("option");
            placeholder.value = "";
            placeholder.textContent = "—";
            select.appendChild(placeholder);
            for (const value of question.choices) {
                const option = doc.createElement("option");
                option.value = value;
                option.textContent = value;
                select.appendChild(option);
            }
            if (question.allow_no_response) {
                const option = doc.createElement("option");
                option.value = NO_RESPONSE;
                option.textContent = noRespLabel;
                option.className = "no-response";
                select.appendChild(option);
            }
            select.addEventListener("change", notify);
            body.appendChild(select);
            readValues = () => (select.value && select.value !== NO_RESPONSE ? [select.value] : null);
            isNoResponse = () => select.value === NO_RESPONSE;
            break;
        }
        case "AllChoice": {
            for (const value of question.choices) {
                const label = doc.createElement("label");
                const input = doc.createElement("input");
                input.type = "checkbox";
                input.name = "value";
                input.value = value;
                input.addEventListener("change", notify);
                label.appendChild(input);
                label.appendChild(doc.createTextNode(" " + value));
                body.appendChild(label);
            }
            let noRespBox: HTMLInputElement | null = null;
            if (question.allow_no_response) {
                const label = doc.createElement("label");
                label.className = "no-response";
                noRespBox = doc.createElement("input");
                noRespBox.type = "checkbox";
                noRespBox.name = "no-response";
                noRespBox.addEventListener("change", notify);
                label.appendChild(noRespBox);
                label.appendChild(doc.createTextNode(" " + noRespLabel));
                body.appendChild(label);
            }
            readValues = () => {
                const checked = [...body.querySelectorAll<HTMLInputElement>("input[name=value]:checked")];
                return checked.length ? checked.map((input) => input.value) : null;
            };
            isNoResponse = () => noRespBox?.checked ?? false;
            break;
        }
        case "Numeric": {
            const input = doc.createElement("input");
            input.type = "text";
            input.name = "value";
            input.placeholder = "2, -3, 5/2";
            input.addEventListener("input", notify);
            body.appendChild(input);
            let noRespBox: HTMLInputElement | null = null;
            if (question.allow_no_response) {
                const label = doc.createElement("label");
                label.className = "no-response";
                noRespBox = doc.createElement("input");
                noRespBox.type = "checkbox";
                noRespBox.name = "no-response";
                noRespBox.addEventListener("change", notify);
                label.appendChild(noRespBox);
                label.appendChild(doc.createTextNode(" " + noRespLabel));
                body.appendChild(label);
            }
            readValues = () => {
                const text = input.value.trim();
                return /^-?\d+(\/\d+)?$/.test(text) ? [text] : null;
            };
            isNoResponse = () => noRespBox?.checked ?? false;
            break;
        }
        default: {
            // unknown prompt type: visible error, safe free-text fallback
            const banner = doc.createElement("p");
            banner.className = "error-banner";
            banner.textContent = `Невідомий тип запитання: ${question.prompt_type}`;
            body.appendChild(banner);
            const input = doc.createElement("input");
            input.type = "text";
            input.name = "value";
            input.addEventListener("input", notify);
            body.appendChild(input);
            readValues = () => (input.value.trim() ? [input.value.trim()] : null);
            isNoResponse = () => false;
        }
    }

    // confidence selector: the two presets plus a free 0-100 slider
    const confidence = doc.createElement("fieldset");
    confidence.className = "confidence";
    const legend = doc.createElement("legend");
    legend.textContent = translate(translations, "TR_HOWCONF", "Наскільки Ви впевнені у відповіді?");
    confidence.appendChild(legend);
    const presets: [string, number][] = [
        [translate(translations, "TR_LOWCONF", "Наполовину (50%)"), 50],
        [translate(translations, "TR_HICONF", "Цілком (100%)"), 100],
    ];
    for (const [text, value] of presets) {
        const label = doc.createElement("label");
        const input = doc.createElement("input");
        input.type = "radio";
        input.name = "cf";
        input.value = String(value);
        if (value === 100) input.checked = true;
        input.addEventListener("change", notify);
        label.appendChild(input);
        label.appendChild(doc.createTextNode(" " + text));
        confidence.appendChild(label);
    }
    const sliderLabel = doc.createElement("label");
    sliderLabel.className = "cf-free";
    const slider = doc.createElement("input");
    slider.type = "range";
    slider.min = "0";
    slider.max = "100";
    slider.value = "100";
    slider.name = "cf-free";
    const sliderValue = doc.createElement("span");
    sliderValue.textContent = "";
    slider.addEventListener("input", () => {
        sliderValue.textContent = `${slider.value}%`;
        const checked = confidence.querySelector<HTMLInputElement>("input[name=cf]:checked");
        if (checked) checked.checked = false;
        notify();
    });
    sliderLabel.appendChild(slider);
    sliderLabel.appendChild(sliderValue);
    confidence.appendChild(sliderLabel);
    root.appendChild(confidence);

    const readCf = (): number => {
        const checked = confidence.querySelector<HTMLInputElement>("input[name=cf]:checked");
        return checked ? Number(checked.value) : Number(slider.value);
    };

    const syncConfidenceVisibility = () => {
        confidence.hidden = isNoResponse();
    };
    listeners.push(syncConfidenceVisibility);

    return {
        element: root,
        read(): AnswerSelection | null {
            if (isNoResponse()) {
                return { noResponse: true, values: [] };
            }
            const values = readValues();
            if (values === null) return null;
            const cf = readCf();
            return { noResponse: false, values: values.map((value) => ({ value, cf })) };
        },
        onChange(listener: () => void) {
            listeners.push(listener);
        },
    };
}
