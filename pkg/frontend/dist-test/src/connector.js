// HTTP transport to the vote service.  Vote submission retries with the
// identical payload on network failure; the server's duplicate rejection
// makes the retry idempotent, and a 409 counts as successfully absorbed.
const VOTE_RETRIES = 5;
const RETRY_DELAY_MS = 500;
function sleep(ms) {
    return new Promise((resolve) => setTimeout(resolve, ms));
}
export class HttpTransport {
    baseUrl;
    constructor(baseUrl = "") {
        this.baseUrl = baseUrl;
    }
    async next(worker) {
        const r = await fetch(`${this.baseUrl}/api/next?worker=${encodeURIComponent(worker)}`);
        if (!r.ok) {
            throw new Error(`next failed: HTTP ${r.status}`);
        }
        return (await r.json());
    }
    async vote(v) {
        let lastError = null;
        for (let attempt = 0; attempt < VOTE_RETRIES; attempt++) {
            try {
                const r = await fetch(`${this.baseUrl}/api/vote`, {
                    method: "POST",
                    headers: { "Content-Type": "application/json" },
                    body: JSON.stringify(v),
                });
                if (r.ok) {
                    return "accepted";
                }
                if (r.status === 409) {
                    return "duplicate";
                }
                throw new Error(`vote failed: HTTP ${r.status}`);
            }
            catch (err) {
                lastError = err;
                await sleep(RETRY_DELAY_MS * (attempt + 1));
            }
        }
        throw lastError instanceof Error ? lastError : new Error(String(lastError));
    }
}
