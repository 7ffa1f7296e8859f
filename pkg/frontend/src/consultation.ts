/** Consultation view: the engine asks, the user answers; Why/Explain/Restart
 *  mirror the server verbs.  Every displayed fact comes from an API response. */

import { api, ApiError, SessionState } from "./api.js";
import { showError } from "./banner.js";
import { renderQuestionForm, QuestionForm } from "./question.js";

export class ConsultationController {
    private sessionId = "";
    private translations: Record<string, string> = {};
    private form: QuestionForm | null = null;
    private busy = false;

    constructor(
        private host: HTMLElement,
        private kbId: string,
        private doc: Document = document,
    ) {}

    tr(key: string, fallback: string): string {
        return this.translations[key] ?? fallback;
    }

    async run(): Promise<void> {
        try {
            const state = await api.createConsultation(this.kbId);
            this.sessionId = state.session_id;
            this.translations = state.kb?.translations ?? {};
            this.render(state, state.kb?.title ?? "");
        } catch (err) {
            this.fail(err);
        }
    }

    private fail(err: unknown): void {
        const message = err instanceof ApiError ? `${err.body.code}: ${err.body.message}` : String(err);
        showError(this.host, message, this.doc);
    }

    private button(label: string, id: string, onClick: () => void): HTMLButtonElement {
        const button = this.doc.createElement("button");
        button.type = "button";
        button.id = id;
        button.textContent = label;
        button.addEventListener("click", onClick);
        return button;
    }

    private render(state: SessionState, title: string): void {
        const doc = this.doc;
        this.host.textContent = "";

        if (title) {
            const heading = doc.createElement("h2");
            heading.textContent = title;
            this.host.appendChild(heading);
        }

        const questionPane = doc.createElement("section");
        questionPane.id = "question-pane";
        const verdictPane = doc.createElement("section");
        verdictPane.id = "verdict-pane";
        const explainPane = doc.createElement("section");
        explainPane.id = "explain-pane";
        const buttons = doc.createElement("div");
        buttons.className = "buttons";

        const submit = this.button(this.tr("B_SUBMIT", "Відповісти"), "btn-answer", () => {
            void this.submitAnswer();
        });
        const why = this.button(this.tr("B_WHYASK", "Чому питаємо?"), "btn-why", () => {
            void this.showWhy(explainPane);
        });
        const explainBtn = this.button(this.tr("B_EXPLAIN", "Пояснити"), "btn-explain", () => {
            void this.showExplain(explainPane);
        });
        const restart = this.button(this.tr("B_RESTART", "До початку"), "btn-restart", () => {
            void this.restart();
        });
        buttons.append(submit, why, explainBtn, restart);
        this.host.append(questionPane, buttons, verdictPane, explainPane);

        if (state.status === "in_progress" && state.question) {
            this.form = renderQuestionForm(state.question, this.translations, doc);
            questionPane.appendChild(this.form.element);
            submit.disabled = true;
            this.form.onChange(() => {
                submit.disabled = this.form?.read() === null;
            });
            explainBtn.disabled = true;
        } else {
            this.form = null;
            submit.disabled = true;
            why.disabled = true;
            this.renderConclusions(state, verdictPane);
        }
    }

    private renderConclusions(state: SessionState, pane: HTMLElement): void {
        const doc = this.doc;
        const heading = doc.createElement("h3");
        heading.textContent = this.tr("TR_RESULTS", "ВИСНОВОК:");
        pane.appendChild(heading);
        const list = doc.createElement("ul");
        const accepted = (state.conclusions ?? []).filter((c) => c.accepted);
        if (accepted.length === 0) {
            const item = doc.createElement("li");
            item.textContent = this.tr("TR_NOTDETERMINED", "неможливо визначити");
            list.appendChild(item);
        }
        for (const conclusion of accepted) {
            const item = doc.createElement("li");
            item.textContent =
                `${conclusion.value} ${this.tr("TR_WITH", "з")} ` +
                `${conclusion.cf}${this.tr("TR_CONF", "% довіри")}`;
            list.appendChild(item);
        }
        pane.appendChild(list);
    }

    private async submitAnswer(): Promise<void> {
        if (!this.form || this.busy) return;
        const selection = this.form.read();
        if (selection === null) return;
        this.busy = true;
        try {
            const state = await api.sendAnswer(
                this.sessionId,
                selection.noResponse ? { no_response: true } : { values: selection.values },
            );
            this.render(state, "");
        } catch (err) {
            this.fail(err);
        } finally {
            this.busy = false;
        }
    }

    private async showWhy(pane: HTMLElement): Promise<void> {
        try {
            const body = await api.why(this.sessionId);
            this.showText(pane, body.text);
        } catch (err) {
            if (err instanceof ApiError && err.status === 409) {
                const button = this.host.querySelector<HTMLButtonElement>("#btn-why");
                if (button) button.disabled = true;
                return;
            }
            this.fail(err);
        }
    }

    private async showExplain(pane: HTMLElement): Promise<void> {
        try {
            const body = await api.explain(this.sessionId);
            this.showText(pane, body.text);
        } catch (err) {
            if (err instanceof ApiError && err.status === 409) {
                const button = this.host.querySelector<HTMLButtonElement>("#btn-explain");
                if (button) button.disabled = true;
                return;
            }
            this.fail(err);
        }
    }

    private showText(pane: HTMLElement, text: string): void {
        pane.textContent = "";
        const block = this.doc.createElement("pre");
        block.className = "explanation";
        block.textContent = text;
        pane.appendChild(block);
    }

    private async restart(): Promise<void> {
        try {
            const state = await api.restart(this.sessionId);
            this.render(state, "");
        } catch (err) {
            this.fail(err);
        }
    }
}
