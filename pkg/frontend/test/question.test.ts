import { describe, expect, it } from "vitest";

import { Question } from "../src/api.js";
import { renderQuestionForm } from "../src/question.js";

const TR = {
    TR_YES: "Так",
    TR_NO: "Ні",
    TR_NORESP: "Не знаю",
    TR_HOWCONF: "Наскільки Ви впевнені у відповіді?",
    TR_LOWCONF: "Наполовину (50%)",
    TR_HICONF: "Цілком (100%)",
};

function question(overrides: Partial<Question>): Question {
    return {
        attr: "q",
        prompt: "?",
        prompt_type: "YesNo",
        choices: ["yes", "no"],
        allow_no_response: true,
        cf_options: [50, 100],
        ...overrides,
    };
}

function radioLabels(root: HTMLElement): string[] {
    return [...root.querySelectorAll("input[type=radio][name=value]")].map(
        (input) => input.parentElement?.textContent?.trim() ?? "",
    );
}

describe("renderQuestionForm", () => {
    it("YesNo shows exactly two options plus Не знаю", () => {
        const form = renderQuestionForm(question({}), TR);
        expect(radioLabels(form.element)).toEqual(["Так", "Ні", "Не знаю"]);
    });

    it("MultChoice and ForcedChoice render radio lists with the opt-out", () => {
        for (const promptType of ["MultChoice", "ForcedChoice"]) {
            const form = renderQuestionForm(
                question({ prompt_type: promptType, choices: ["a", "b", "c"] }),
                TR,
            );
            expect(radioLabels(form.element)).toEqual(["a", "b", "c", "Не знаю"]);
        }
    });

    it("Choice renders a drop-down of all values", () => {
        const form = renderQuestionForm(
            question({ prompt_type: "Choice", choices: ["v1", "v2", "v3", "v4", "v5"] }),
            TR,
        );
        const select = form.element.querySelector("select")!;
        const texts = [...select.options].map((option) => option.textContent);
        expect(texts).toEqual(["—", "v1", "v2", "v3", "v4", "v5", "Не знаю"]);
    });

    it("AllChoice renders independent checkboxes", () => {
        const form = renderQuestionForm(
            question({ prompt_type: "AllChoice", choices: ["s1", "s2", "s3", "s4"] }),
            TR,
        );
        const boxes = form.element.querySelectorAll("input[type=checkbox][name=value]");
        expect(boxes).toHaveLength(4);
        expect(form.element.textContent).toContain("Не знаю");
        (boxes[1] as HTMLInputElement).checked = true;
        (boxes[3] as HTMLInputElement).checked = true;
        const selection = form.read()!;
        expect(selection.values.map((entry) => entry.value)).toEqual(["s2", "s4"]);
    });

    it("Numeric renders a number field and validates the format", () => {
        const form = renderQuestionForm(
            question({ prompt_type: "Numeric", choices: [] }),
            TR,
        );
        const input = form.element.querySelector<HTMLInputElement>("input[name=value]")!;
        expect(form.read()).toBeNull();
        input.value = "abc";
        expect(form.read()).toBeNull();
        input.value = "5/2";
        expect(form.read()!.values).toEqual([{ value: "5/2", cf: 100 }]);
    });

    it("unknown prompt type falls back with a visible error banner", () => {
        const form = renderQuestionForm(question({ prompt_type: "Hologram" }), TR);
        expect(form.element.querySelector(".error-banner")).not.toBeNull();
        const input = form.element.querySelector<HTMLInputElement>("input[name=value]")!;
        input.value = "text";
        expect(form.read()!.values[0].value).toBe("text");
    });

    it("nothing selected reads as null (Answer stays disabled)", () => {
        const form = renderQuestionForm(question({}), TR);
        expect(form.read()).toBeNull();
    });

    it("confidence presets and selection ride along", () => {
        const form = renderQuestionForm(question({}), TR);
        expect(form.element.textContent).toContain("Наполовину (50%)");
        expect(form.element.textContent).toContain("Цілком (100%)");
        const yes = form.element.querySelector<HTMLInputElement>("input[value=yes]")!;
        yes.checked = true;
        const half = form.element.querySelector<HTMLInputElement>("input[name=cf][value='50']")!;
        half.checked = true;
        expect(form.read()).toEqual({
            noResponse: false,
            values: [{ value: "yes", cf: 50 }],
        });
    });

    it("choosing Не знаю hides the confidence control", () => {
        const form = renderQuestionForm(question({}), TR);
        const fieldset = form.element.querySelector<HTMLFieldSetElement>(".confidence")!;
        expect(fieldset.hidden).toBe(false);
        const optOut = form.element.querySelector<HTMLInputElement>(
            "input[value=__no_response__]",
        )!;
        optOut.checked = true;
        optOut.dispatchEvent(new Event("change"));
        expect(fieldset.hidden).toBe(true);
        expect(form.read()).toEqual({ noResponse: true, values: [] });
    });
});
