/** Recorded-response fetch stub. Every UI fact must come from these
 *  fixtures; any request outside the script fails the test. */

export interface StubResponse {
    status?: number;
    body: unknown;
}

type Route = StubResponse | StubResponse[];

export interface FetchStub {
    calls: { method: string; url: string; body?: unknown }[];
    restore(): void;
}

export function stubFetch(routes: Record<string, Route>): FetchStub {
    const queues = new Map<string, StubResponse[]>();
    for (const [key, value] of Object.entries(routes)) {
        queues.set(key, Array.isArray(value) ? [...value] : [value]);
    }
    const calls: FetchStub["calls"] = [];
    const original = globalThis.fetch;

    globalThis.fetch = (async (input: RequestInfo | URL, init?: RequestInit) => {
        const url = String(input);
        const method = init?.method ?? "GET";
        const parsedBody = init?.body ? JSON.parse(String(init.body)) : undefined;
        calls.push({ method, url, body: parsedBody });
        const key = `${method} ${url}`;
        const queue = queues.get(key);
        if (!queue || queue.length === 0) {
            throw new Error(`unstubbed request: ${key}`);
        }
        const next = queue.length > 1 ? queue.shift()! : queue[0];
        return new Response(JSON.stringify(next.body), {
            status: next.status ?? 200,
            headers: { "Content-Type": "application/json" },
        });
    }) as typeof fetch;

    return {
        calls,
        restore() {
            globalThis.fetch = original;
        },
    };
}

export function flushMicrotasks(): Promise<void> {
    return new Promise((resolve) => setTimeout(resolve, 0));
}
