"""Prompt templates for the three pipeline stages.

The judging template pins the machine-readable contract: the reply must be
a bare JSON object whose "preference" field is exactly "answer1" or
"answer2". The generation template requests (but cannot enforce) the
Reasoning / Final Answer structure.
"""

GENERATION_TEMPLATE = """\
Solve the following problem. Explain your reasoning, then give the final answer.

Problem: {question}

Format your response as follows:
- Start with "Reasoning:" followed by a concise explanation of your thought process
- Then write "Final Answer:" followed by ONLY the final answer
- Keep the explanation short and to the point
"""

JUDGE_TEMPLATE = """\
Given a problem and two different solutions, determine which solution is better.

Problem: {question}

Solution 1: {answer1}

Solution 2: {answer2}

Weigh the correctness of the final answer first, then the clarity and
completeness of the reasoning.

IMPORTANT: Respond with ONLY a JSON object, no other text before or after,
with exactly this structure:

{{"preference": "answer1", "reasoning": "brief explanation"}}

The "preference" field must be exactly either "answer1" or "answer2"
(nothing else). The "reasoning" field should be one or two sentences.

JSON response:
"""

TAU_ZERO_SHOT_TEMPLATE = """\
Problem: {question}

Chain 1: {w1}

Chain 2: {w2}

Target model's judgment: {preferred} is better.

Analyze this case and predict whether the target model answers the problem
correctly. End your reply with a single probability between 0 and 1.

Your analysis and final answer:
"""

TAU_FEW_SHOT_PREFIX = """\
You will see worked examples of problems, candidate reasoning chains, the
target model's judgment, and whether the target model answered correctly.
Use the pattern to judge the final case.

{examples}

"""


def generation_prompt(question: str) -> str:
    return GENERATION_TEMPLATE.format(question=question)


def judge_prompt(question: str, answer1: str, answer2: str) -> str:
    return JUDGE_TEMPLATE.format(question=question, answer1=answer1,
                                 answer2=answer2)


def tau_prompt(question: str, w1: str, w2: str, v: int,
               few_shot_examples: str | None = None) -> str:
    preferred = "Chain 1" if v == 1 else "Chain 2"
    body = TAU_ZERO_SHOT_TEMPLATE.format(question=question, w1=w1, w2=w2,
                                         preferred=preferred)
    if few_shot_examples:
        return TAU_FEW_SHOT_PREFIX.format(examples=few_shot_examples) + body
    return body
