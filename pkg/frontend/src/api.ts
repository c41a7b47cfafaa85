// Typed client for the two scoring endpoints.  The UI never computes any
// score itself: every displayed number originates from a /score response.

export interface RuleItem {
  symptom: string;
  score: number;
}

export interface RuleDoc {
  syndrome: string;
  positiveLabel: string;
  prior: number;
  items: RuleItem[];
  threshold: number;
  accuracy: number | null;
}

export interface ScoreResult {
  syndrome: string;
  positiveLabel: string;
  totalScore: number;
  threshold: number;
  decision: "positive" | "negative";
  contributions: Record<string, number>;
}

export class EndpointError extends Error {
  constructor(message: string, readonly status?: number) {
    super(message);
  }
}

async function expectJson(resp: Response): Promise<unknown> {
  if (!resp.ok) {
    let detail = `${resp.status}`;
    try {
      const body = (await resp.json()) as { error?: string };
      if (body && body.error) detail = `${resp.status}: ${body.error}`;
    } catch {
      /* non-JSON error body; status alone will do */
    }
    throw new EndpointError(`endpoint answered ${detail}`, resp.status);
  }
  return resp.json();
}

export async function fetchRules(endpoint: string): Promise<RuleDoc[]> {
  let resp: Response;
  try {
    resp = await fetch(`${endpoint}/rules`);
  } catch (e) {
    throw new EndpointError(`cannot reach ${endpoint}: ${String(e)}`);
  }
  return (await expectJson(resp)) as RuleDoc[];
}

export async function fetchScores(
  endpoint: string,
  symptoms: string[],
): Promise<ScoreResult[]> {
  let resp: Response;
  try {
    resp = await fetch(`${endpoint}/score`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ symptoms }),
    });
  } catch (e) {
    throw new EndpointError(`cannot reach ${endpoint}: ${String(e)}`);
  }
  return (await expectJson(resp)) as ScoreResult[];
}
