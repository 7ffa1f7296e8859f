/** Typed client for the mathforge JSON API. All state lives on the server. */

export interface Question {
    attr: string;
    prompt: string;
    prompt_type: "YesNo" | "MultChoice" | "ForcedChoice" | "Choice" | "AllChoice" | "Numeric" | string;
    choices: string[];
    allow_no_response: boolean;
    cf_options: number[];
}

export interface Conclusion {
    goal: string;
    value: string;
    cf: number;
    accepted: boolean;
}

export interface SessionState {
    session_id: string;
    status: "in_progress" | "concluded" | "undeterminable";
    question: Question | null;
    conclusions: Conclusion[] | null;
    trace_cursor: number;
    kb?: KbInfo;
}

export interface KbInfo {
    id: string;
    title: string;
    translations: Record<string, string>;
}

export interface TemplateInfo {
    id: string;
    title: string;
    tasks: string[];
    answer_stride: number;
}

export interface ControlSpec {
    kind: string;
    label: string;
    default?: unknown;
    values?: string[];
    vmin?: string;
    vmax?: string;
    step?: string;
    value_type?: string;
    width?: number | null;
    [extra: string]: unknown;
}

export interface FormSpec {
    caption: string | null;
    grid: Record<"top" | "bottom" | "left" | "right", string[][]>;
    controls: Record<string, ControlSpec>;
}

export interface TemplatesResponse {
    templates: TemplateInfo[];
    form_spec: FormSpec;
}

export interface WorksheetResponse {
    html: string;
    latex: string;
    answer_key: unknown[];
}

export interface ApiErrorBody {
    code: string;
    message: string;
    details?: Record<string, unknown>;
}

export class ApiError extends Error {
    constructor(
        public status: number,
        public body: ApiErrorBody,
    ) {
        super(body.message);
    }
}

async function request<T>(method: string, url: string, payload?: unknown): Promise<T> {
    const init: RequestInit = { method };
    if (payload !== undefined) {
        init.headers = { "Content-Type": "application/json" };
        init.body = JSON.stringify(payload);
    }
    const response = await fetch(url, init);
    const body = await response.json();
    if (!response.ok) {
        const err = body as ApiErrorBody;
        throw new ApiError(response.status, {
            code: err.code ?? "Error",
            message: err.message ?? response.statusText,
            details: err.details,
        });
    }
    return body as T;
}

export const api = {
    templates(): Promise<TemplatesResponse> {
        return request("GET", "/api/templates");
    },
    generateWorksheet(body: {
        template: string;
        num_variants: number;
        seed: number;
        show_answers: boolean;
    }): Promise<WorksheetResponse> {
        return request("POST", "/api/worksheets", body);
    },
    createConsultation(kbId: string): Promise<SessionState> {
        return request("POST", "/api/consultations", { kb_id: kbId });
    },
    sendAnswer(
        sessionId: string,
        body: { values?: { value: string | number; cf: number }[]; no_response?: boolean },
    ): Promise<SessionState> {
        return request("POST", `/api/consultations/${sessionId}/answers`, body);
    },
    why(sessionId: string): Promise<{ text: string }> {
        return request("GET", `/api/consultations/${sessionId}/why`);
    },
    explain(sessionId: string): Promise<{ text: string }> {
        return request("GET", `/api/consultations/${sessionId}/explain`);
    },
    restart(sessionId: string): Promise<SessionState> {
        return request("POST", `/api/consultations/${sessionId}/restart`);
    },
};
